#!/usr/bin/env python3
"""Dynamical rays, the separatrix, and the plus/minus membership verdict.

Run:  python3 demos/03_rays_and_membership.py

The membership question: do the rays at angles 0 and 1/2 (which land at the
repelling fixed origin of the monic representative) separate the two critical
orbits, left orbit on the left, right orbit on the right?  Parameters passing
the test form the embedded copy of the degree-(d+1) multibrot set inside the
bicritical odd connectedness locus.
"""

import json

from bicritical.family import MonicOdd
from bicritical.loci import membership_pm, select_branch
from bicritical.rays import Angle, build_separatrix, side_classify, trace_ray

print("== Tracing the separatrix rays for a = 3/2 (d = 1) ==")
s = select_branch(1.5, 1)
m = MonicOdd(d=1, s=s)
print(f"landing branch: s = {s:.6f}, so P_s(z) = z^3 + {m.odd_coeffs[0].real:.1f} z")
for th in (Angle(0, 1), Angle(1, 2)):
    t = trace_ray(m, th)
    print(f"ray {th}: {t.status.value}, {len(t.points)} points, lands at {t.landing:.2e}")

sep = build_separatrix(m)
print()
print("side classification against the separatrix:")
for z, label in [
    (m.critical_points()[0], "+s sqrt(d)  (right critical point)"),
    (m.critical_points()[1], "-s sqrt(d)  (left critical point)"),
    (1.0 + 0j, "z = 1"),
    (-2j, "z = -2i"),
]:
    print(f"  {label:38s} -> {side_classify(z, sep).value}")

print()
print("== The membership battery ==")
for a, d in [(1.5, 1), (1.875, 2), (3.0, 1), (-1.5, 1), (-1.0, 1), (0.5, 1), (2.2 + 0.8j, 1)]:
    v = membership_pm(a, d)
    extra = ""
    if v.witness is not None:
        extra = f"  witness: orbit[{v.witness.index}] = {v.witness.point:.4f} on side {v.witness.side.value}"
    print(f"a = {a!s:12s} d={d}:  {v.outcome.value:13s} {v.reason.value if v.reason else '':20s}{extra}")

print()
print("Machine-readable form (the CLI and HTTP service emit exactly this):")
print(json.dumps(membership_pm(3.0, 1).to_json()))
