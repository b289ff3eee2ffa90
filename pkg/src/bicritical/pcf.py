"""Newton solvers for postcritically finite parameters and center matching.

All solvers accumulate derivatives forward alongside the orbit (no finite
differences inside the loop; finite differences survive only as a cross-check
in the tests).  Found parameters are re-validated: the return residual must
meet tolerance and the period must be minimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateOrbit, NewtonFailed, NoMatch, PeriodNotMinimal
from .family import BicriticalOdd, Unicritical, odd_coefficients

__all__ = [
    "CenterSpec",
    "MatchResult",
    "solve_center_unicritical",
    "solve_center_bicritical",
    "solve_cut_point",
    "match_center",
]

NEWTON_MAX = 50


@dataclass(frozen=True)
class CenterSpec:
    """A solved postcritically finite parameter with its certificate."""

    family: str  # "unicritical" | "bicritical_odd"
    degree: int  # polynomial degree of the family member
    period: int
    seed: complex
    found: Optional[complex]
    residual: float
    newton_iters: int

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "period": self.period,
            "seed": [self.seed.real, self.seed.imag],
            "found": None if self.found is None else [self.found.real, self.found.imag],
            "residual": self.residual,
            "newton_iters": self.newton_iters,
        }


def _newton(f: Callable[[complex], tuple[complex, complex]], seed: complex, tol: float):
    """Generic Newton loop on a map returning (value, derivative)."""
    x = complex(seed)
    for it in range(1, NEWTON_MAX + 1):
        val, dval = f(x)
        if dval == 0 or not (math.isfinite(abs(val)) and math.isfinite(abs(dval))):
            raise NewtonFailed(f"derivative degenerate at iteration {it}")
        step = val / dval
        x -= step
        if abs(step) <= 1e-14 * max(1.0, abs(x)):
            val, _ = f(x)
            if abs(val) <= tol:
                return x, abs(val), it
            raise NewtonFailed(f"converged to residual {abs(val):.3e} above {tol:.1e}")
    raise NewtonFailed(f"no convergence in {NEWTON_MAX} iterations from seed {seed}")


def _proper_divisors(p: int) -> list[int]:
    return [q for q in range(1, p) if p % q == 0]


def solve_center_unicritical(degree: int, period: int, seed: complex, tol: float = 1e-12) -> CenterSpec:
    """Superattracting center of z^degree + c: Newton on c -> f_c^period(0).

    Derivative by forward accumulation: dz' = degree z^(degree-1) dz + 1.
    """
    if degree < 2 or period < 1:
        raise ValueError("need degree >= 2 and period >= 1")

    def objective(c: complex):
        z, dz = 0j, 0j
        for _ in range(period):
            dz = degree * z ** (degree - 1) * dz + 1.0
            z = z**degree + c
        return z, dz

    c, residual, iters = _newton(objective, seed, tol)
    f = Unicritical(d=degree - 1, c=c)
    z = 0j
    orbit = [z]
    for _ in range(period):
        z = f(z)
        orbit.append(z)
    for q in _proper_divisors(period):
        if abs(orbit[q]) <= 1e-6:
            raise PeriodNotMinimal(f"critical orbit returns after {q} < {period} steps")
    return CenterSpec(
        family="unicritical",
        degree=degree,
        period=period,
        seed=complex(seed),
        found=c,
        residual=residual,
        newton_iters=iters,
    )


def _bicritical_orbit_derivative(d: int, a: complex, steps: int) -> tuple[complex, complex]:
    """(p_a^steps(sqrt(d)), d/da of the same) by forward accumulation."""
    r = [float(x) for x in odd_coefficients(d)]

    def h(z):  # p_a with a = 1
        u = z * z
        acc = 0j
        for rk in reversed(r):
            acc = acc * u + rk
        return z * acc

    def hp(z):  # h'(z) = (1 - z^2/d)^d
        return (1 - z * z / d) ** d

    z = complex(math.sqrt(d))
    dz = 0j
    for _ in range(steps):
        z, dz = a * h(z), h(z) + a * hp(z) * dz
    return z, dz


def solve_center_bicritical(d: int, period: int, seed: complex, tol: float = 1e-10) -> CenterSpec:
    """Superattracting center of the odd family: p_a^period(sqrt(d)) = sqrt(d).

    Only the right critical orbit is solved; the left one is its negation.
    """
    if d < 1 or period < 1:
        raise ValueError("need d >= 1 and period >= 1")
    rd = math.sqrt(d)

    def objective(a: complex):
        z, dz = _bicritical_orbit_derivative(d, a, period)
        return z - rd, dz

    a, residual, iters = _newton(objective, seed, tol)
    p = BicriticalOdd(d=d, a=a)
    z = complex(rd)
    orbit = [z]
    for _ in range(period):
        z = p(z)
        orbit.append(z)
    for q in _proper_divisors(period):
        if abs(orbit[q] - rd) <= 1e-6:
            raise PeriodNotMinimal(f"critical orbit returns after {q} < {period} steps")
    return CenterSpec(
        family="bicritical_odd",
        degree=2 * d + 1,
        period=period,
        seed=complex(seed),
        found=a,
        residual=residual,
        newton_iters=iters,
    )


def solve_cut_point(d: int, k: int, seed: complex, tol: float = 1e-10) -> CenterSpec:
    """Parameter with p_a^k(sqrt(d)) = 0 and no earlier visit to the origin.

    Newton on a -> p_a^k(sqrt(d)); intermediate iterates of the solution must
    stay at distance > 1e-4 from 0, otherwise the orbit is degenerate (it hit
    the fixed origin too early).
    """
    if d < 1 or k < 2:
        raise ValueError("need d >= 1 and k >= 2")

    def objective(a: complex):
        return _bicritical_orbit_derivative(d, a, k)

    a, residual, iters = _newton(objective, seed, tol)
    p = BicriticalOdd(d=d, a=a)
    z = complex(math.sqrt(d))
    for j in range(1, k):
        z = p(z)
        if abs(z) <= 1e-4:
            raise DegenerateOrbit(f"orbit point {j} is {abs(z):.2e} from the origin")
    return CenterSpec(
        family="bicritical_odd",
        degree=2 * d + 1,
        period=k,
        seed=complex(seed),
        found=a,
        residual=residual,
        newton_iters=iters,
    )


class MatchResult(NamedTuple):
    period: int
    c: complex
    coding_odd: str
    coding_uni: str


def _orbit_code(orbit: list[complex], crit: complex, val: complex, tol: float = 1e-6) -> str:
    """Shape code of a superattracting orbit, invariant under affine conjugacy.

    Points are normalized so the critical point sits at 0 and the critical
    value at 1; each later point contributes 'R' (real axis), '+' or '-'
    depending on its imaginary part.  Orientation-reversing identifications
    flip '+' and '-', so rabbit- and corabbit-like portraits stay distinct.
    """
    span = val - crit
    if span == 0:
        return ""
    out = []
    for z in orbit[2:]:
        u = (z - crit) / span
        if abs(u.imag) <= tol * max(1.0, abs(u)):
            out.append("R")
        else:
            out.append("+" if u.imag > 0 else "-")
    return "".join(out)


def _normalized_orbit(orbit: list[complex], crit: complex, val: complex) -> np.ndarray:
    span = val - crit
    return np.array([(z - crit) / span for z in orbit], dtype=complex)


def _center_candidates(degree: int, period: int) -> list[complex]:
    """All minimal-period-`period` centers of z^degree + c via the critical polynomial."""
    c_poly = np.polynomial.polynomial.Polynomial([0.0, 1.0])  # f^1(0) = c
    polys = [c_poly]
    for _ in range(period - 1):
        c_poly = c_poly**degree + np.polynomial.polynomial.Polynomial([0.0, 1.0])
        polys.append(c_poly)
    roots = polys[-1].roots()
    out = []
    for c in roots:
        f = Unicritical(d=degree - 1, c=complex(c))
        z = 0j
        orbit = [z]
        for _ in range(period):
            z = f(z)
            orbit.append(z)
        if abs(orbit[-1]) > 1e-6:
            continue
        if any(abs(orbit[q]) <= 1e-6 for q in _proper_divisors(period)):
            continue
        if any(abs(c - prev) <= 1e-8 for prev in out):
            continue
        out.append(complex(c))
    return out


def match_center(a: complex, d: int, max_period: int = 64) -> MatchResult:
    """Unicritical center of degree d+1 matching a superattracting odd parameter.

    The period is the minimal return time of the right critical orbit of p_a.
    Candidates are every minimal-period center of z^(d+1) + c; the match is the
    candidate whose normalized critical orbit is closest in shape to the
    normalized right orbit of p_a, and its orientation code must agree.
    Raises NoMatch when the orbit is not periodic, when no candidate shares
    the code, or when two candidates are indistinguishably close.
    """
    p_map = BicriticalOdd(d=d, a=a)
    rd = math.sqrt(d)
    z = complex(rd)
    orbit = [z]
    period = None
    for n in range(1, max_period + 1):
        z = p_map(z)
        orbit.append(z)
        if abs(z - rd) <= 1e-8:
            period = n
            break
    if period is None:
        raise NoMatch(f"right critical orbit not periodic within {max_period} steps")
    odd_orbit = orbit[:period]
    code_odd = _orbit_code(odd_orbit, crit=complex(rd), val=orbit[1] if period > 1 else complex(rd))

    degree = d + 1
    best = None
    second = None
    best_c = None
    best_code = None
    for c in _center_candidates(degree, period):
        f = Unicritical(d=d, c=c)
        w = 0j
        uni_orbit = [w]
        for _ in range(period - 1):
            w = f(w)
            uni_orbit.append(w)
        code_uni = _orbit_code(uni_orbit, crit=0j, val=c) if period > 1 else ""
        if period > 1:
            u_odd = _normalized_orbit(odd_orbit, complex(rd), orbit[1])
            u_uni = _normalized_orbit(uni_orbit, 0j, c)
            dist = float(np.max(np.abs(u_odd - u_uni)))
        else:
            dist = 0.0
        if code_uni != code_odd:
            continue
        if best is None or dist < best:
            second = best
            best, best_c, best_code = dist, c, code_uni
        elif second is None or dist < second:
            second = dist
    if best_c is None:
        raise NoMatch(f"no period-{period} center of degree {degree} shares code {code_odd!r}")
    if second is not None and second < 2.0 * best:
        raise NoMatch("two candidate centers are indistinguishably close in shape")
    return MatchResult(period=period, c=best_c, coding_odd=code_odd, coding_uni=best_code)
