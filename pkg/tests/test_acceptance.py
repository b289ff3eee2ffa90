"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 10 is a documented expected failure (strict xfail): the
stated winding 2d is measured as 2d+1; see the adjacent green test pinning
the honest value and the project notes.
"""

import cmath
import functools
import json
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from bicritical.dynamics import bottcher, bottcher_radius
from bicritical.family import (
    BicriticalOdd,
    MonicOdd,
    branner_douady,
    leading_coeff,
    monic_roots,
    quotient_poly,
)
from bicritical.loci import Outcome, membership_pm, parameter_bottcher
from bicritical.pcf import match_center, solve_center_bicritical, solve_cut_point
from bicritical.rays import Angle, RayStatus, trace_ray
from bicritical.render import (
    ParameterCBO,
    ParameterMultibrot,
    RenderJob,
    Viewport,
    golden_hash,
    render,
)

GOLDENS = json.loads((Path(__file__).parent / "golden_hashes.json").read_text())


@contextmanager
def criterion(number: int, label: str, budget_s: float):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:2d} FAIL {label}", flush=True)
        raise
    elapsed = time.monotonic() - start
    if elapsed > budget_s:
        print(f"ACCEPTANCE {number:2d} FAIL {label} (ran {elapsed:.2f}s > {budget_s:.0f}s)", flush=True)
        raise AssertionError(f"criterion {number} exceeded its {budget_s:.0f}s budget: {elapsed:.2f}s")
    print(f"ACCEPTANCE {number:2d} PASS {label} ({elapsed:.2f}s)", flush=True)


def test_criterion_01_leading_coefficient():
    with criterion(1, "leading coefficient equals T(a) exactly, d=1..6", 1.0):
        for d in range(1, 7):
            for a in (Fraction(1), Fraction(-3, 2), Fraction(7, 5), Fraction(355, 113)):
                p = BicriticalOdd(d=d, a=a)
                t = Fraction((-1) ** d, d**d * (2 * d + 1)) * a
                assert p.leading() == t
                assert leading_coeff(d, a) == t


def test_criterion_02_semiconjugacy():
    with criterion(2, "quotient semiconjugacy residual <= 1e-9 (1+|p|^2)", 1.0):
        rng = random.Random(42)
        for _ in range(100):
            d = rng.randint(1, 5)
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) or 1.0
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            p = BicriticalOdd(d=d, a=a)
            q = quotient_poly(d, a)
            pz = p(z)
            assert abs(q(z * z) - pz * pz) <= 1e-9 * (1 + abs(pz) ** 2)


def test_criterion_03_quotient_critical_points():
    with criterion(3, "critical points of the d=1, a=1 quotient are {1, 3}", 1.0):
        q = quotient_poly(1, 1.0)
        roots = sorted(
            np.roots(list(reversed([complex(c) for c in q.derivative_coefficients()]))),
            key=lambda r: r.real,
        )
        assert abs(roots[0] - 1) <= 1e-10
        assert abs(roots[1] - 3) <= 1e-10


def test_criterion_04_cubic_correspondence():
    with criterion(4, "cubic-family conjugacy residual <= 1e-8 at 50 samples", 1.0):
        for a in (1 / 3, 1 / 2, 0.4 + 0.1j):
            cubic, psi, residual = branner_douady(a, n_samples=50)
            assert residual <= 1e-8
            assert abs(psi.alpha**2 - a * a / 9) < 1e-12  # forced scale
            assert abs(cubic.b - (2 * cubic.a_tilde**3 - 2 * cubic.a_tilde)) < 1e-14


def test_criterion_05_bottcher():
    with criterion(5, "Boettcher functional equation 1e-6 and oddness 1e-9", 2.0):
        for d, a in ((1, 1.5), (2, 1.875)):
            m = MonicOdd(d=d, s=monic_roots(d, a)[0])
            deg = m.degree
            r = bottcher_radius(m)
            for k in range(50):
                z = r * (1 + 9 * k / 49) * cmath.exp(2j * math.pi * (0.618 * k % 1))
                phi = bottcher(m, z)
                assert abs(bottcher(m, m(z)) - phi**deg) <= 1e-6 * abs(phi) ** deg
                assert abs(bottcher(m, -z) + phi) <= 1e-9 * abs(phi)


def test_criterion_06_ray_symmetry():
    with criterion(6, "traced half-shift ray is the pointwise negation", 5.0):
        for d, a in ((1, 1.5), (2, 1.875)):
            for s in monic_roots(d, a):
                m = MonicOdd(d=d, s=s)
                t0 = trace_ray(m, Angle(0, 1))
                if not (t0.status is RayStatus.LANDED and abs(t0.landing) < 1e-6):
                    continue
                t1 = trace_ray(m, Angle(1, 2))
                n = min(len(t0.points), len(t1.points))
                assert n >= 3
                for z0, z1 in zip(t0.points[:n], t1.points[:n]):
                    assert abs(z0 + z1) <= 1e-6 * max(1.0, abs(z0))
                break
            else:
                raise AssertionError(f"no landing representative for d={d}, a={a}")


def test_criterion_07_membership_battery():
    with criterion(7, "membership battery over the six pinned parameters", 30.0):
        v = membership_pm(1.5, 1)
        assert v.outcome is Outcome.ACCEPT
        v = membership_pm(1.875, 2)
        assert v.outcome is Outcome.ACCEPT
        v = membership_pm(3.0, 1)
        assert v.outcome is Outcome.REJECT and v.witness.index == 2
        v = membership_pm(-1.5, 1)
        assert v.outcome is Outcome.REJECT
        for d in (1, 2):
            assert membership_pm(-1.0, d).outcome is not Outcome.ACCEPT
        assert membership_pm(0.5, 1).outcome is not Outcome.ACCEPT


def test_criterion_08_cut_point():
    with criterion(8, "cut-point Newton hits 3*sqrt(3)/2 and the orbit 1->sqrt(3)->0", 1.0):
        spec = solve_cut_point(1, 2, 2.5)
        assert abs(spec.found - 3 * math.sqrt(3) / 2) <= 1e-8
        p = BicriticalOdd(d=1, a=spec.found)
        z1 = p(1.0)
        assert abs(z1 - math.sqrt(3)) <= 1e-7
        assert abs(p(z1)) <= 1e-7


def test_criterion_09_center_correspondence():
    with criterion(9, "renormalization center matching: (1, 0) and (2, -1)", 10.0):
        r1 = match_center(1.5, 1)
        assert r1.period == 1 and abs(r1.c) < 1e-9
        assert r1.coding_odd == r1.coding_uni
        a2 = solve_center_bicritical(1, 2, 2.2).found
        r2 = match_center(a2, 1)
        assert r2.period == 2 and abs(r2.c + 1) < 1e-9
        assert r2.coding_odd == r2.coding_uni


@functools.lru_cache(maxsize=None)
def _winding(d: int, radius: float, samples: int = 4096) -> float:
    total = 0.0
    prev = None
    first = None
    for k in range(samples):
        s = radius * cmath.exp(2j * math.pi * k / samples)
        ang = cmath.phase(parameter_bottcher(s, d))
        if prev is None:
            first = ang
        else:
            total += (ang - prev + math.pi) % (2 * math.pi) - math.pi
        prev = ang
    total += (first - prev + math.pi) % (2 * math.pi) - math.pi
    return total / (2 * math.pi)


@pytest.mark.xfail(
    strict=True,
    reason="stated winding 2d is measured as 2d+1 for d=1,2 (4096-sample oracle); "
    "the marked critical value grows like s^(2d+1), see the project notes",
)
def test_criterion_10_parameter_map_degree_as_stated():
    with criterion(10, "winding of the parameter map equals 2d (documented failure)", 30.0):
        w1 = round(_winding(1, 12.0))
        w2 = round(_winding(2, 7.0))
        print(f"ACCEPTANCE 10 measured windings: d=1 -> {w1}, d=2 -> {w2} (stated: 2, 4)", flush=True)
        assert w1 == 2 and w2 == 4


def test_criterion_10_parameter_map_degree_measured():
    with criterion(10, "winding of the parameter map (honest value 2d+1)", 30.0):
        assert round(_winding(1, 12.0)) == 3
        assert round(_winding(2, 7.0)) == 5


def test_criterion_11_figure_reproduction():
    with criterion(11, "1024^2 binary renders, symmetries, stable goldens", 60.0):
        start = time.monotonic()
        job2 = RenderJob(
            plane=ParameterCBO(d=2),
            viewport=Viewport(center=0j, width=6.0, px_w=1024, px_h=1024),
            max_iter=500,
        )
        img2 = render(job2, workers=2)
        cbo2_time = time.monotonic() - start
        assert cbo2_time < 5.0, f"CBO_2 budget: {cbo2_time:.2f}s"
        arr = img2.as_array()
        assert np.array_equal(arr, arr[::-1, ::-1, :])  # 180-degree rotation
        assert np.array_equal(arr, arr[::-1, :, :])  # conjugation mirror
        assert golden_hash(img2) == GOLDENS["cbo_2_1024_binary_500"]
        assert render(job2, workers=1).data == img2.data  # thread-count invariance
        for d in (1, 3, 4, 5):
            job = RenderJob(
                plane=ParameterCBO(d=d),
                viewport=Viewport(center=0j, width=6.0, px_w=1024, px_h=1024),
                max_iter=500,
            )
            img = render(job, workers=2)
            a = img.as_array()
            assert np.array_equal(a, a[::-1, ::-1, :])
            assert np.array_equal(a, a[::-1, :, :])
            assert golden_hash(img) == GOLDENS[f"cbo_{d}_1024_binary_500"]
        m3 = RenderJob(
            plane=ParameterMultibrot(degree=3),
            viewport=Viewport(center=0j, width=4.5, px_w=1024, px_h=1024),
            max_iter=500,
        )
        assert golden_hash(render(m3, workers=2)) == GOLDENS["m3_1024_binary_500"]


def test_criterion_12_gradient_check():
    with criterion(12, "forward solver derivatives match central differences", 1.0):
        from bicritical.pcf import _bicritical_orbit_derivative

        rng = random.Random(1234)
        h = 1e-5
        done = 0
        while done < 20:
            a = complex(rng.uniform(-3, 3), rng.uniform(-2, 2)) or 1.0
            d = rng.choice([1, 2, 3])
            steps = rng.randint(1, 6)
            z, dz = _bicritical_orbit_derivative(d, a, steps)
            if not (abs(z) < 1e6 and abs(dz) < 1e9):
                continue  # escaped orbits overflow the finite-difference probe
            re = (_bicritical_orbit_derivative(d, a + h, steps)[0]
                  - _bicritical_orbit_derivative(d, a - h, steps)[0])
            im = (_bicritical_orbit_derivative(d, a + 1j * h, steps)[0]
                  - _bicritical_orbit_derivative(d, a - 1j * h, steps)[0])
            fd = (re + im / 1j) / (4 * h)
            assert abs(fd - dz) <= 1e-4 * max(1.0, abs(dz))
            done += 1

        def uni_orbit(c, degree, period):
            z, dz = 0j, 0j
            for _ in range(period):
                dz = degree * z ** (degree - 1) * dz + 1.0
                z = z**degree + c
            return z, dz

        done = 0
        while done < 20:
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            degree = rng.choice([2, 3])
            period = rng.randint(1, 6)
            z, dz = uni_orbit(c, degree, period)
            if not (abs(z) < 1e6 and abs(dz) < 1e9):
                continue
            re = uni_orbit(c + h, degree, period)[0] - uni_orbit(c - h, degree, period)[0]
            im = uni_orbit(c + 1j * h, degree, period)[0] - uni_orbit(c - 1j * h, degree, period)[0]
            fd = (re + im / 1j) / (4 * h)
            assert abs(fd - dz) <= 1e-4 * max(1.0, abs(dz))
            done += 1
