"""Self-contained invariant battery behind the ``verify`` CLI command.

A fast, deterministic subset of the property suite: each check re-derives an
identity from scratch and reports pass/fail.  Exit-code semantics live in the
CLI; this module only gathers results.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import numpy as np

from .dynamics import bottcher, bottcher_radius, escape_radius, green, in_connectedness_locus
from .family import BicriticalOdd, MonicOdd, branner_douady, leading_coeff, monic_roots, quotient_poly
from .loci import Outcome, membership_pm
from .pcf import solve_center_bicritical, solve_cut_point
from .rays import Angle, angle_map, cut_point_angles

__all__ = ["run_checks"]


def _checks():
    rng = random.Random(20240811)

    def rc(r=2.0):
        return complex(rng.uniform(-r, r), rng.uniform(-r, r))

    def leading_exact():
        return all(
            BicriticalOdd(d=d, a=Fraction(3, 7)).leading() == leading_coeff(d, Fraction(3, 7))
            for d in range(1, 7)
        )

    def oddness():
        p = BicriticalOdd(d=2, a=1.1 - 0.6j)
        return all(abs(p(-z) + p(z)) <= 1e-12 * max(1.0, abs(p(z))) for z in (rc() for _ in range(50)))

    def semiconjugacy():
        for d in (1, 2, 3):
            a = rc() or 1.0
            q = quotient_poly(d, a)
            p = BicriticalOdd(d=d, a=a)
            for _ in range(30):
                z = rc(1.5)
                if abs(q(z * z) - p(z) ** 2) > 1e-9 * (1 + abs(p(z)) ** 2):
                    return False
        return True

    def quotient_sign():
        a = rc() or 1.0
        q1, q2 = quotient_poly(2, a), quotient_poly(2, -a)
        return all(abs(complex(x) - complex(y)) < 1e-12 for x, y in zip(q1.coeffs, q2.coeffs))

    def cubic_correspondence():
        _, _, res = branner_douady(0.4 + 0.1j)
        return res <= 1e-8

    def root_ratios():
        roots = monic_roots(3, 1.2 + 0.7j)
        ratio = cmath.exp(1j * math.pi / 3)
        return all(abs(r2 / r1 - ratio) < 1e-12 for r1, r2 in zip(roots, roots[1:]))

    def escape_certificate():
        for m in (BicriticalOdd(d=1, a=3), BicriticalOdd(d=2, a=0.05)):
            r = escape_radius(m)
            for k in range(512):
                z = r * cmath.exp(2j * math.pi * k / 512)
                if abs(m(z)) < 2 * abs(z):
                    return False
        return True

    def green_functional():
        m = MonicOdd(d=1, s=monic_roots(1, 1.5)[0])
        ok = 0
        while ok < 40:
            z = rc(4.0)
            g = green(m, z)
            if g.g == 0:
                continue
            if abs(green(m, m(z)).g - m.degree * g.g) > 1e-9 * m.degree * g.g:
                return False
            ok += 1
        return True

    def bottcher_equation():
        m = MonicOdd(d=2, s=monic_roots(2, 1.875)[1])
        r = bottcher_radius(m)
        for k in range(25):
            z = r * (1 + k / 5) * cmath.exp(2j * math.pi * (0.618 * k % 1))
            if abs(bottcher(m, m(z)) - bottcher(m, z) ** m.degree) > 1e-6 * abs(bottcher(m, z)) ** m.degree:
                return False
        return True

    def angle_orbit():
        th = Angle(1, 8)
        orbit = [th]
        for _ in range(4):
            orbit.append(angle_map(orbit[-1], 2))
        return orbit[-2:] == [Angle(0, 1), Angle(0, 1)]

    def cut_angles_half_shift():
        zero_side, half_side = cut_point_angles(2, 2)
        union = {th.value for th in zero_side} | {th.value for th in half_side}
        return union == {(v + Fraction(1, 2)) % 1 for v in union}

    def membership_battery():
        return (
            membership_pm(1.5, 1).outcome is Outcome.ACCEPT
            and membership_pm(3.0, 1).outcome is Outcome.REJECT
            and membership_pm(0.5, 1).outcome is Outcome.REJECT
            and membership_pm(-1.0, 1).outcome is not Outcome.ACCEPT
        )

    def connectedness_symmetry():
        for _ in range(40):
            a = rc(4.0) or 1.0
            ref = in_connectedness_locus(BicriticalOdd(d=2, a=a), max_iter=200)
            if in_connectedness_locus(BicriticalOdd(d=2, a=-a), max_iter=200) != ref:
                return False
        return True

    def center_solvers():
        a1 = solve_center_bicritical(1, 1, 1.4).found
        cut = solve_cut_point(1, 2, 2.5).found
        return abs(a1 - 1.5) < 1e-10 and abs(cut - 3 * math.sqrt(3) / 2) < 1e-8

    def render_determinism():
        from .render import ParameterCBO, RenderJob, Viewport, render

        job = RenderJob(
            plane=ParameterCBO(d=1),
            viewport=Viewport(center=0j, width=6.0, px_w=64, px_h=64),
            max_iter=120,
        )
        img = render(job)
        arr = img.as_array()
        return bool(np.array_equal(arr, arr[::-1, ::-1, :])) and render(job).data == img.data

    return [
        ("leading-coefficient-exact", leading_exact),
        ("bicritical-oddness", oddness),
        ("quotient-semiconjugacy", semiconjugacy),
        ("quotient-sign-invariance", quotient_sign),
        ("cubic-correspondence", cubic_correspondence),
        ("monic-root-ratios", root_ratios),
        ("escape-radius-certificate", escape_certificate),
        ("green-functional-equation", green_functional),
        ("bottcher-functional-equation", bottcher_equation),
        ("angle-orbit-exactness", angle_orbit),
        ("cut-angles-half-shift", cut_angles_half_shift),
        ("membership-battery", membership_battery),
        ("connectedness-symmetry", connectedness_symmetry),
        ("center-solvers", center_solvers),
        ("render-determinism", render_determinism),
    ]


def run_checks() -> dict:
    results = []
    failed = 0
    for name, fn in _checks():
        try:
            passed = bool(fn())
        except Exception as exc:  # a crashed check is a failed check
            results.append({"name": name, "passed": False, "error": repr(exc)})
            failed += 1
            continue
        results.append({"name": name, "passed": passed})
        failed += 0 if passed else 1
    return {"passed": len(results) - failed, "failed": failed, "checks": results}
