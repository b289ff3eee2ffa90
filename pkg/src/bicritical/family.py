"""Polynomial families and the algebraic maps between them.

Three families are modelled:

* ``Unicritical(d, c)``      -- z^(d+1) + c, the unique finite critical point is 0.
* ``BicriticalOdd(d, a)``    -- the odd polynomial a * integral_0^z (1 - w^2/d)^d dw,
  the unique odd normal form with critical points at +-sqrt(d).
* ``MonicOdd(d, s)``         -- the monic rescaling s * p_a(z/s) of a bicritical odd
  map, defined whenever s^(2d) equals the leading coefficient of p_a.

Coefficients of the odd family are exact rationals so that leading-coefficient
identities can be tested without rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import ConjugacyNotFound, DegreeUnsupported, NotBicriticalOdd, ZeroParameter

__all__ = [
    "Unicritical",
    "BicriticalOdd",
    "MonicOdd",
    "QuotientPoly",
    "CubicBD",
    "AffineMap",
    "odd_coefficients",
    "eval_bicritical",
    "eval_monic",
    "leading_coeff",
    "monic_roots",
    "quotient_poly",
    "branner_douady",
    "normalize_bicritical",
]


@lru_cache(maxsize=None)
def odd_coefficients(d: int) -> tuple[Fraction, ...]:
    """Exact coefficients r_k with p_a(z) = a * sum r_k z^(2k+1).

    r_k = C(d,k) (-1)^k / (d^k (2k+1)), obtained by integrating the binomial
    expansion of (1 - w^2/d)^d term by term.
    """
    if d < 1:
        raise DegreeUnsupported(f"d must be >= 1, got {d}")
    return tuple(Fraction(comb(d, k) * (-1) ** k, d**k * (2 * k + 1)) for k in range(d + 1))


def leading_coeff(d: int, a):
    """Leading coefficient T(a) = (-1)^d a / (d^d (2d+1)) of the odd family.

    Exact (a Fraction) when ``a`` is rational, complex otherwise.
    """
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    t = Fraction((-1) ** d, d**d * (2 * d + 1))
    if isinstance(a, Rational):
        return a * t
    return complex(a) * float(t)


@dataclass(frozen=True)
class Unicritical:
    """The map z -> z^(d+1) + c.  Degree is d+1; critical point is 0."""

    d: int
    c: complex

    def __post_init__(self):
        if self.d < 1:
            raise DegreeUnsupported(f"d must be >= 1, got {self.d}")

    @property
    def degree(self) -> int:
        return self.d + 1

    def __call__(self, z: complex) -> complex:
        return z**self.degree + self.c

    def derivative(self, z: complex) -> complex:
        return self.degree * z ** (self.degree - 1)

    def critical_points(self) -> tuple[complex, ...]:
        return (0j,)

    def coefficients(self) -> tuple[complex, ...]:
        """Dense coefficient vector, ascending powers."""
        out = [0j] * (self.degree + 1)
        out[0] = complex(self.c)
        out[-1] = 1.0 + 0j
        return tuple(out)


@dataclass(frozen=True)
class BicriticalOdd:
    """Odd polynomial p_a(z) = a * sum r_k z^(2k+1) with critical points +-sqrt(d)."""

    d: int
    a: complex

    def __post_init__(self):
        if self.d < 1:
            raise DegreeUnsupported(f"d must be >= 1, got {self.d}")
        if self.a == 0:
            raise ZeroParameter("a must be nonzero")

    @property
    def degree(self) -> int:
        return 2 * self.d + 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return odd_coefficients(self.d)

    @cached_property
    def _float_coeffs(self) -> tuple[float, ...]:
        return tuple(float(r) for r in reversed(self.coeffs))

    def __call__(self, z: complex) -> complex:
        # Horner in u = z^2 over the odd coefficients.
        u = z * z
        acc = 0j
        for r in self._float_coeffs:
            acc = acc * u + r
        return self.a * z * acc

    def derivative(self, z: complex) -> complex:
        """p_a'(z) = a (1 - z^2/d)^d."""
        return self.a * (1 - z * z / self.d) ** self.d

    def critical_points(self) -> tuple[complex, ...]:
        rd = math.sqrt(self.d)
        return (complex(rd), complex(-rd))

    def leading(self):
        """Exact a*r_d when a is rational; equals leading_coeff(d, a)."""
        if isinstance(self.a, Rational):
            return self.a * self.coeffs[-1]
        return complex(self.a) * float(self.coeffs[-1])

    def coefficients(self) -> tuple[complex, ...]:
        out = [0j] * (self.degree + 1)
        for k, r in enumerate(self.coeffs):
            out[2 * k + 1] = complex(self.a) * float(r)
        return tuple(out)


def eval_bicritical(f: BicriticalOdd, z: complex) -> complex:
    """Evaluate p_a at z through the expanded coefficient form."""
    return f(z)


def monic_roots(d: int, a: complex) -> list[complex]:
    """All 2d solutions of s^(2d) = T(a), sorted by principal argument.

    Consecutive roots differ by the factor e^(i pi / d).
    """
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    t = complex(leading_coeff(d, a))
    mod = abs(t) ** (1.0 / (2 * d))
    base = cmath.phase(t) / (2 * d)
    roots = [mod * cmath.exp(1j * (base + math.pi * k / d)) for k in range(2 * d)]
    roots.sort(key=cmath.phase)
    return roots


@dataclass(frozen=True)
class MonicOdd:
    """Monic representative P_s(z) = s * p_a(z/s) with s^(2d) = T(a).

    The parameter a is recovered from s: a = (-1)^d d^d (2d+1) s^(2d).
    Critical points are +-s*sqrt(d).
    """

    d: int
    s: complex

    def __post_init__(self):
        if self.d < 1:
            raise DegreeUnsupported(f"d must be >= 1, got {self.d}")
        if self.s == 0:
            raise ZeroParameter("s must be nonzero")

    @property
    def degree(self) -> int:
        return 2 * self.d + 1

    @cached_property
    def a(self) -> complex:
        return (-1) ** self.d * self.d**self.d * (2 * self.d + 1) * complex(self.s) ** (2 * self.d)

    @cached_property
    def odd_coeffs(self) -> tuple[complex, ...]:
        """Coefficient of z^(2k+1) is a r_k s^(-2k); the top one is exactly 1."""
        r = odd_coefficients(self.d)
        a = self.a
        s2 = complex(self.s) ** 2
        out = [a * float(r[k]) / s2**k for k in range(self.d + 1)]
        out[-1] = 1.0 + 0j
        return tuple(out)

    @cached_property
    def _rev_coeffs(self) -> tuple[complex, ...]:
        return tuple(reversed(self.odd_coeffs))

    @cached_property
    def _rev_deriv_coeffs(self) -> tuple[complex, ...]:
        return tuple((2 * k + 1) * ck for k, ck in reversed(list(enumerate(self.odd_coeffs))))

    def __call__(self, z: complex) -> complex:
        u = z * z
        acc = 0j
        for ck in self._rev_coeffs:
            acc = acc * u + ck
        return z * acc

    def derivative(self, z: complex) -> complex:
        u = z * z
        acc = 0j
        for ck in self._rev_deriv_coeffs:
            acc = acc * u + ck
        return acc

    def critical_points(self) -> tuple[complex, ...]:
        w = complex(self.s) * math.sqrt(self.d)
        return (w, -w)

    def coefficients(self) -> tuple[complex, ...]:
        out = [0j] * (self.degree + 1)
        for k, ck in enumerate(self.odd_coeffs):
            out[2 * k + 1] = ck
        return tuple(out)


def eval_monic(m: MonicOdd, z: complex) -> complex:
    """Evaluate the monic representative; P_s is odd and monic of degree 2d+1."""
    return m(z)


@dataclass(frozen=True)
class QuotientPoly:
    """The unique polynomial in u with Q(z^2) = p_a(z)^2.

    ``coeffs[k]`` multiplies u^(k+1); the constant term is always zero.
    Invariant under a -> -a.
    """

    d: int
    a: complex
    coeffs: tuple

    @property
    def degree(self) -> int:
        return 2 * self.d + 1

    def __call__(self, u: complex) -> complex:
        acc = 0j
        for ck in reversed(self.coeffs):
            acc = acc * u + complex(ck)
        return u * acc

    def derivative_coefficients(self) -> tuple[complex, ...]:
        """Ascending coefficients of dQ/du."""
        return tuple((k + 1) * complex(ck) for k, ck in enumerate(self.coeffs))


def quotient_poly(d: int, a) -> QuotientPoly:
    """Square the odd coefficient vector of p_a and read off even powers.

    p_a(z) = a z rho(z^2) gives Q(u) = a^2 u rho(u)^2, so the coefficients are
    the self-convolution of the r_k scaled by a^2.  Exact when a is rational.
    """
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    r = odd_coefficients(d)
    a2 = a * a if isinstance(a, Rational) else complex(a) ** 2
    conv = []
    for m in range(2 * d + 1):
        lo = max(0, m - d)
        acc = sum(r[i] * r[m - i] for i in range(lo, min(m, d) + 1))
        conv.append(a2 * acc if isinstance(a, Rational) else a2 * float(acc))
    return QuotientPoly(d=d, a=a, coeffs=tuple(conv))


@dataclass(frozen=True)
class CubicBD:
    """The cubic Q(z) = z^3 - 3 a~^2 z + b with critical points +-a~."""

    a_tilde: complex
    b: complex

    def __call__(self, z: complex) -> complex:
        return z**3 - 3 * self.a_tilde**2 * z + self.b

    def critical_points(self) -> tuple[complex, complex]:
        return (self.a_tilde, -self.a_tilde)


@dataclass(frozen=True)
class AffineMap:
    """z -> alpha z + beta with alpha != 0."""

    alpha: complex
    beta: complex = 0j

    def __post_init__(self):
        if self.alpha == 0:
            raise ZeroParameter("alpha must be nonzero")

    def __call__(self, z: complex) -> complex:
        return self.alpha * z + self.beta

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.alpha, -self.beta / self.alpha)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: z -> self(other(z))."""
        return AffineMap(self.alpha * other.alpha, self.alpha * other.beta + self.beta)

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(1.0 + 0j, 0j)


def _disk_samples(n: int, radius: float) -> list[complex]:
    """Deterministic low-discrepancy spiral covering the disk of given radius."""
    golden = (math.sqrt(5) - 1) / 2
    return [
        radius * math.sqrt((k + 0.5) / n) * cmath.exp(2j * math.pi * ((k * golden) % 1.0))
        for k in range(n)
    ]


def branner_douady(a: complex, d: int = 1, n_samples: int = 50, tol: float = 1e-8):
    """Affine conjugacy between the quotient cubic of p_a and Q_{a~, 2a~^3-2a~}.

    Matching the degree-3 coefficients forces the conjugacy scale alpha with
    alpha^2 = a^2/9, and with it a~ = a/3 (either sign of a~ gives the same
    affine class).  Both signs of alpha are tried together with both
    critical-point pairings and the minimal-residual candidate is returned as
    (CubicBD, AffineMap, residual) with the residual measured as
    max |psi(Q_a(z)) - Q(psi(z))| over sample points in the disk of radius 2.
    """
    if d != 1:
        raise DegreeUnsupported("the cubic correspondence is defined for d=1 only")
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    a = complex(a)
    quot = quotient_poly(1, a)
    a_tilde = a / 3
    target = CubicBD(a_tilde=a_tilde, b=2 * a_tilde**3 - 2 * a_tilde)
    samples = _disk_samples(n_samples, 2.0)
    best = None
    for alpha in (a / 3, -a / 3):
        beta = -2 * a * a / (9 * alpha)
        psi = AffineMap(alpha, beta)
        residual = max(abs(psi(quot(z)) - target(psi(z))) for z in samples)
        if best is None or residual < best[1]:
            best = (psi, residual)
    psi, residual = best
    if residual > tol:
        raise ConjugacyNotFound(
            f"no affine candidate conjugates the quotient of p_{a} onto the cubic "
            f"(best residual {residual:.3e})"
        )
    return target, psi, residual


def normalize_bicritical(odd_coeffs: Sequence[complex], cluster_tol: float = 1e-8):
    """Recognize an odd polynomial as a rescaled p_{a,d}.

    ``odd_coeffs`` lists the coefficients of z, z^3, ..., z^(2d+1).  The
    derivative must factor as A (1 - z^2/x^2)^d, i.e. all roots of the
    derivative (as a polynomial in y = z^2) must coalesce at a single nonzero
    value x^2 within the clustering tolerance.  Returns (d, a, phi) where
    phi(z) = (sqrt(d)/x) z conjugates the input onto p_{a,d}.
    """
    cs = [complex(c) for c in odd_coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    d = len(cs) - 1
    if d < 1:
        raise NotBicriticalOdd("degree must be at least 3")
    # derivative in y = z^2: D(y) = sum (2k+1) c_k y^k, which must equal
    # A (1 - y/x^2)^d.  The root multiset {x (xd), -x (xd)} is recognized on
    # the factored form: x^2 from the top coefficient ratio, then every
    # coefficient checked against the binomial expansion.  (Clustering the
    # numerical roots directly is ill-conditioned for multiple roots.)
    dpoly = [(2 * k + 1) * cs[k] for k in range(d + 1)]
    a = cs[0]  # conjugation by a linear scaling fixes the z-coefficient p'(0)
    if a == 0 or dpoly[-1] == 0:
        raise NotBicriticalOdd("derivative does not factor as A(1 - z^2/x^2)^d")
    y0 = -dpoly[d - 1] / (d * dpoly[d])  # candidate x^2
    scale = max(abs(v) for v in dpoly)
    if abs(y0) <= cluster_tol * scale:
        raise NotBicriticalOdd("derivative roots collapse at the origin")
    for k in range(d + 1):
        expect = a * comb(d, k) * (-1 / y0) ** k
        if abs(dpoly[k] - expect) > cluster_tol * max(abs(expect), scale):
            raise NotBicriticalOdd(
                "derivative roots do not form two equal clusters at +-x with x != 0"
            )
    x = cmath.sqrt(y0)
    phi = AffineMap(math.sqrt(d) / x, 0j)
    return d, a, phi
