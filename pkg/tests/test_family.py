import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicritical.errors import (
    ConjugacyNotFound,
    DegreeUnsupported,
    NotBicriticalOdd,
    ZeroParameter,
)
from bicritical.family import (
    AffineMap,
    BicriticalOdd,
    CubicBD,
    MonicOdd,
    Unicritical,
    branner_douady,
    eval_bicritical,
    eval_monic,
    leading_coeff,
    monic_roots,
    normalize_bicritical,
    odd_coefficients,
    quotient_poly,
)

rng = random.Random(20240811)


def random_complex(r=2.0):
    return complex(rng.uniform(-r, r), rng.uniform(-r, r))


class TestCoefficients:
    def test_r0_is_one(self):
        for d in range(1, 7):
            assert odd_coefficients(d)[0] == 1

    def test_leading_matches_T(self):
        # exact rational identity for every d <= 6
        for d in range(1, 7):
            for a in [Fraction(1), Fraction(-3, 2), Fraction(7, 5), Fraction(22, 7)]:
                assert BicriticalOdd(d=d, a=a).leading() == leading_coeff(d, a)

    def test_eval_against_quadrature(self, quad_oracle):
        # p_a(z) = a * integral of (1 - w^2/d)^d, checked away from the series
        for d in (1, 2, 3):
            for _ in range(5):
                a, z = random_complex(), random_complex(1.5)
                expected = a * quad_oracle(lambda w: (1 - w * w / d) ** d, z)
                got = eval_bicritical(BicriticalOdd(d=d, a=a), z)
                assert abs(got - expected) <= 1e-11 * (1 + abs(expected))

    def test_known_values(self, quad_oracle):
        assert eval_bicritical(BicriticalOdd(d=1, a=1), 0j) == 0
        assert abs(eval_bicritical(BicriticalOdd(d=1, a=1), 1.0) - 2 / 3) < 1e-15
        # a = 1/integral_0^1 (1-t^2)^2 dt = 15/8 makes sqrt(2) a fixed critical point
        quad = quad_oracle(lambda t: (1 - t * t) ** 2, 1.0 + 0j)
        assert abs(quad - 8 / 15) < 1e-13
        p = BicriticalOdd(d=2, a=Fraction(15, 8))
        assert abs(p(math.sqrt(2)) - math.sqrt(2)) < 1e-14

    def test_hand_iteration_a3(self):
        p = BicriticalOdd(d=1, a=3)
        z = p(1.0)
        assert abs(z - 2) < 1e-14
        z = p(z)
        assert abs(z + 2) < 1e-14
        z = p(z)
        assert abs(z - 2) < 1e-14

    @given(st.integers(min_value=1, max_value=5), st.complex_numbers(max_magnitude=3, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_oddness(self, d, z):
        p = BicriticalOdd(d=d, a=1.3 - 0.4j)
        assert abs(p(-z) + p(z)) <= 1e-12 * max(1.0, abs(p(z)))

    def test_derivative_values(self):
        for d in (1, 2, 4):
            p = BicriticalOdd(d=d, a=2.5 + 0.3j)
            assert abs(p.derivative(0j) - p.a) < 1e-12
            for cp in p.critical_points():
                assert abs(p.derivative(cp)) < 1e-12


class TestLeadingCoeff:
    def test_paper_normal_form_values(self):
        assert leading_coeff(1, 1) == Fraction(-1, 3)
        assert leading_coeff(2, 1) == Fraction(1, 20)
        assert leading_coeff(3, -1) == Fraction(1, 189)

    def test_zero_parameter(self):
        with pytest.raises(ZeroParameter):
            leading_coeff(2, 0)


class TestMonicRoots:
    def test_d1(self):
        roots = monic_roots(1, 1)
        expected = 1 / math.sqrt(3)
        assert len(roots) == 2
        assert min(abs(r - 1j * expected) for r in roots) < 1e-12
        assert min(abs(r + 1j * expected) for r in roots) < 1e-12

    def test_d2(self):
        roots = monic_roots(2, 1)
        m = 20 ** -0.25
        for target in (m, -m, 1j * m, -1j * m):
            assert min(abs(r - target) for r in roots) < 1e-12

    def test_sorted_and_ratios(self):
        for d in (1, 2, 3):
            roots = monic_roots(d, 0.7 + 1.1j)
            phases = [cmath.phase(r) for r in roots]
            assert phases == sorted(phases)
            ratio = cmath.exp(1j * math.pi / d)
            for r1, r2 in zip(roots, roots[1:]):
                assert abs(r2 / r1 - ratio) < 1e-12

    def test_conjugated_leading_coefficient(self):
        for d in (1, 2, 3):
            a = random_complex() or 1.0
            for s in monic_roots(d, a):
                m = MonicOdd(d=d, s=s)
                assert abs(m.coefficients()[-1] - 1) < 1e-12
                # rebuild leading coefficient from the conjugation directly
                z = 37.0 + 11.0j
                p = BicriticalOdd(d=d, a=a)
                assert abs(s * p(z / s) - m(z)) < 1e-9 * abs(m(z))


class TestMonicOdd:
    def test_fixes_origin(self):
        m = MonicOdd(d=2, s=0.3 + 0.2j)
        assert m(0j) == 0

    def test_oddness_random_disk(self):
        m = MonicOdd(d=1, s=monic_roots(1, 1.5)[0])
        for _ in range(100):
            z = random_complex(3.0)
            assert abs(m(-z) + m(z)) <= 1e-12 * max(1.0, abs(m(z)))

    def test_monic_at_infinity(self):
        for d in (1, 2):
            m = MonicOdd(d=d, s=monic_roots(d, 2.2 - 0.5j)[1])
            z = 1e6 * cmath.exp(0.37j)
            assert abs(m(z) / z ** m.degree - 1) < 1e-4

    def test_recovers_a(self):
        for d in (1, 2, 3):
            a = 1.7 + 0.4j
            for s in monic_roots(d, a):
                assert abs(MonicOdd(d=d, s=s).a - a) < 1e-9 * abs(a)


class TestQuotientPoly:
    def test_d1_exact(self):
        q = quotient_poly(1, Fraction(1))
        assert q.coeffs == (Fraction(1), Fraction(-2, 3), Fraction(1, 9))

    def test_semiconjugacy_residual(self):
        for d in range(1, 6):
            p = BicriticalOdd(d=d, a=1.2 - 0.8j)
            q = quotient_poly(d, p.a)
            for _ in range(100):
                z = random_complex(1.8)
                pz = p(z)
                assert abs(q(z * z) - pz * pz) <= 1e-9 * (1 + abs(pz) ** 2)

    def test_critical_points_d1(self):
        q = quotient_poly(1, 1.0)
        roots = np.roots(list(reversed([complex(c) for c in q.derivative_coefficients()])))
        roots = sorted(roots, key=lambda r: r.real)
        assert abs(roots[0] - 1) < 1e-10
        assert abs(roots[1] - 3) < 1e-10

    @given(st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False))
    @settings(max_examples=40, deadline=None)
    def test_sign_invariance(self, a):
        q1 = quotient_poly(2, a)
        q2 = quotient_poly(2, -a)
        for c1, c2 in zip(q1.coeffs, q2.coeffs):
            assert abs(complex(c1) - complex(c2)) <= 1e-12 * max(1.0, abs(complex(c1)))


class TestBrannerDouady:
    def test_correspondence_values(self):
        cubic, psi, residual = branner_douady(1 / 3)
        assert abs(cubic.a_tilde - 1 / 9) < 1e-14
        assert abs(cubic.b - (2 / 9**3 - 2 / 9)) < 1e-14
        assert residual < 1e-10

    def test_residual_across_parameters(self):
        for a in (1 / 3, 1 / 2, 0.4 + 0.1j):
            cubic, psi, residual = branner_douady(a)
            assert residual <= 1e-8
            # re-check the conjugacy on a fresh sample set
            q = quotient_poly(1, a)
            for _ in range(25):
                z = random_complex(2.0)
                assert abs(psi(q(z)) - cubic(psi(z))) < 1e-9

    def test_forced_scale(self):
        # the degree-3 coefficients force alpha^2 = a^2/9
        for a in (0.5, 1.1 - 0.3j):
            _, psi, _ = branner_douady(a)
            assert abs(psi.alpha**2 - a * a / 9) < 1e-12

    def test_family_condition(self):
        # the target cubic satisfies Q(a~) = -2 a~ (critical point premaps to a fixed point)
        cubic, _, _ = branner_douady(0.8 + 0.2j)
        assert abs(cubic(cubic.a_tilde) + 2 * cubic.a_tilde) < 1e-12

    def test_literal_nine_a_squared_is_not_conjugate(self):
        # negative control: a~ = 9a^2 does not give an affine-conjugate cubic
        # (depressed-form invariants differ), so no small residual can exist.
        for a in (1 / 3, 1 / 2):
            a_t = 9 * a * a
            wrong = CubicBD(a_tilde=a_t, b=2 * a_t**3 - 2 * a_t)
            # affine invariant of a monic depressed cubic z^3 + p z + q is p
            p_wrong = -3 * a_t**2
            p_true = -(a * a) / 3
            assert abs(p_wrong - p_true) > 0.1

    def test_degree_guard(self):
        with pytest.raises(DegreeUnsupported):
            branner_douady(1.0, d=2)


class TestNormalize:
    def test_identity_case(self):
        d, a, phi = normalize_bicritical([1, Fraction(-1, 3)])
        assert d == 1
        assert abs(a - 1) < 1e-12
        assert abs(phi.alpha - 1) < 1e-9
        assert phi.beta == 0

    def test_pure_cube_rejected(self):
        with pytest.raises(NotBicriticalOdd):
            normalize_bicritical([0, 1.0])

    def test_round_trip_random_scalings(self):
        for d, a in ((2, 5.0), (1, 2.3 - 1.2j), (3, 0.7 +0.1j)):
            p = BicriticalOdd(d=d, a=a)
            for _ in range(5):
                k = random_complex(2.0) + 2.5  # keep away from zero
                scaled = [complex(a) * float(r) * k ** (-2 * j) for j, r in enumerate(p.coeffs)]
                d2, a2, phi = normalize_bicritical(scaled)
                assert d2 == d
                assert abs(a2 - a) < 1e-10 * max(1.0, abs(a))
                # phi conjugates the scaled polynomial onto p_a
                def scaled_poly(z):
                    return sum(c * z ** (2 * j + 1) for j, c in enumerate(scaled))
                w = random_complex(1.5)
                lhs = phi(scaled_poly(phi.inverse()(w)))
                assert abs(lhs - p(w)) < 1e-8 * max(1.0, abs(p(w)))


class TestAffineMap:
    def test_compose_invert(self):
        f = AffineMap(2j, 1 - 1j)
        g = AffineMap(-0.5, 3.0)
        z = 0.7 + 0.2j
        assert abs(f.compose(g)(z) - f(g(z))) < 1e-15
        assert abs(f.inverse()(f(z)) - z) < 1e-15

    def test_zero_scale_rejected(self):
        with pytest.raises(ZeroParameter):
            AffineMap(0)


class TestUnicritical:
    def test_progression(self):
        f = Unicritical(d=1, c=0.25)
        assert f(0) == 0.25
        assert f.critical_points() == (0j,)
        assert f.degree == 2
