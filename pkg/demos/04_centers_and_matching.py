#!/usr/bin/env python3
"""Superattracting centers, cut points, and the center correspondence.

Run:  python3 demos/04_centers_and_matching.py

Each accepted center of the odd family renormalizes to a unicritical
polynomial of degree d+1; match_center finds the quadratic (or higher) center
whose normalized critical orbit has the same shape and orientation.
"""

import math

from bicritical.loci import membership_pm
from bicritical.pcf import match_center, solve_center_bicritical, solve_center_unicritical, solve_cut_point

print("== Unicritical centers (z^2 + c) ==")
for period, seed in [(1, 0.1), (2, -0.9), (3, -0.1 + 0.7j), (3, -1.7), (4, -1.3)]:
    spec = solve_center_unicritical(2, period, seed)
    print(f"period {period}: c = {spec.found:.12f}   residual {spec.residual:.1e}")

print()
print("== Odd-family centers (d=1) and their quadratic partners ==")
rows = []
for period, seed in [(1, 1.4), (2, 2.2), (3, 1.8 - 0.5j), (3, 2.45), (4, 2.3)]:
    spec = solve_center_bicritical(1, period, seed)
    verdict = membership_pm(spec.found, 1)
    row = f"period {period}: a = {spec.found:.10f}  membership={verdict.outcome.value}"
    if verdict.outcome.value == "accept":
        m = match_center(spec.found, 1)
        row += f"  ->  c = {m.c:.10f} (codes {m.coding_odd!r} == {m.coding_uni!r})"
    rows.append(row)
    print(row)

print()
print("== Cut points: the right critical orbit reaches the fixed origin ==")
spec = solve_cut_point(1, 2, 2.5)
a = spec.found
print(f"k=2: a = {a:.12f}  (exact value 3 sqrt(3)/2 = {3*math.sqrt(3)/2:.12f})")
from bicritical.family import BicriticalOdd

p = BicriticalOdd(d=1, a=a)
orbit = [1.0 + 0j]
for _ in range(3):
    orbit.append(p(orbit[-1]))
print("orbit of the right critical point:", "  ->  ".join(f"{z:.6f}" for z in orbit))
print("such parameters are the pinch points where the embedded multibrot copy")
print("meets the rest of the connectedness locus")
