"""Orbit iteration, escape detection, Green's escape rate and Boettcher coordinates.

All operations are pure functions over the immutable family types; double
precision is used throughout.  Escape radii are certified per map: whenever
|z| >= escape_radius(map), |P(z)| >= 2|z|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .errors import NonFiniteInput, OutsideBottcherDomain
from .family import BicriticalOdd, MonicOdd, Unicritical

__all__ = [
    "OrbitRecord",
    "PotentialValue",
    "escape_radius",
    "bottcher_radius",
    "iterate",
    "green",
    "bottcher",
    "in_connectedness_locus",
]

AnyMap = Union[Unicritical, BicriticalOdd, MonicOdd]

DEFAULT_MAX_ITER = 500
_HUGE = 1e120


@dataclass(frozen=True)
class OrbitRecord:
    """Forward orbit z_0..z_N with the first escape index, if any."""

    points: tuple[complex, ...]
    escaped_at: Optional[int]
    final_modulus: float

    @property
    def escaped(self) -> bool:
        return self.escaped_at is not None


@dataclass(frozen=True)
class PotentialValue:
    """Green escape-rate value in natural-log units; 0 means bounded within budget."""

    g: float
    iterations_used: int


@lru_cache(maxsize=512)
def escape_radius(m: AnyMap) -> float:
    """Radius R with |P(z)| >= 2|z| for every |z| >= R.

    Combines the Cauchy bound 2(1 + max|c_k/c_lead|) with the growth bound
    (4/|c_lead|)^(1/(D-1)); the latter matters for small leading coefficients
    (e.g. p_a with |a| << 1).  Floored at 4.
    """
    coeffs = m.coefficients()
    lead = abs(coeffs[-1])
    deg = len(coeffs) - 1
    ratio = max(abs(c) for c in coeffs[:-1]) / lead
    return max(4.0, 2.0 * (1.0 + ratio), (4.0 / lead) ** (1.0 / (deg - 1)))


_certified_radius = escape_radius  # callable alias usable where a parameter shadows the name


def iterate(
    m: AnyMap,
    z0: complex,
    max_iter: int = DEFAULT_MAX_ITER,
    escape_radius: Optional[float] = None,
) -> OrbitRecord:
    """Iterate until |z| reaches the escape radius or the budget runs out."""
    z = complex(z0)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteInput(f"orbit seed {z0!r} is not finite")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    r = _certified_radius(m) if escape_radius is None else float(escape_radius)
    pts = [z]
    if abs(z) >= r:
        return OrbitRecord(points=tuple(pts), escaped_at=0, final_modulus=abs(z))
    for n in range(1, max_iter + 1):
        z = m(z)
        pts.append(z)
        if abs(z) >= r or not math.isfinite(abs(z)):
            return OrbitRecord(points=tuple(pts), escaped_at=n, final_modulus=abs(z))
    return OrbitRecord(points=tuple(pts), escaped_at=None, final_modulus=abs(z))


def green(
    m: AnyMap,
    z: complex,
    max_iter: int = DEFAULT_MAX_ITER,
    escape_radius: Optional[float] = None,
) -> PotentialValue:
    """Green's escape rate G(z) = lim log|z_n| / D^n.

    After the first escape the limit is evaluated through the telescoping sum
    log|phi(w)| = log|w| + sum D^-(j+1) (log|P(w_j)| - D log|w_j|), which
    converges to machine precision in a handful of terms.  Satisfies
    G(P(z)) = D G(z) for escaping points; bounded orbits report 0.
    """
    orbit = iterate(m, z, max_iter=max_iter, escape_radius=escape_radius)
    if not orbit.escaped:
        return PotentialValue(g=0.0, iterations_used=max_iter)
    deg = m.degree
    n0 = orbit.escaped_at
    w = orbit.points[n0]
    g_tail = math.log(abs(w))
    used = n0
    scale = 1.0
    for _ in range(80):
        if abs(w) > 1e30:
            break  # corrections are below double noise; w^D would overflow
        pw = m(w)
        used += 1
        scale /= deg
        corr = math.log(abs(pw)) - deg * math.log(abs(w))
        if not math.isfinite(corr):
            break
        g_tail += scale * corr
        w = pw
        if abs(scale * corr) < 1e-18 * g_tail:
            break
    return PotentialValue(g=g_tail / deg**n0, iterations_used=used)


def _is_monic(m: AnyMap, tol: float = 1e-9) -> bool:
    return abs(m.coefficients()[-1] - 1.0) <= tol


@lru_cache(maxsize=512)
def bottcher_radius(m: AnyMap) -> float:
    """Certified radius for the principal-branch Boettcher product.

    Twice the smallest sampled radius at which |P(z)/z^D - 1| <= 1/2 holds on
    the circle, so every telescoping factor stays inside the branch disk.
    """
    deg = m.degree
    samples = [cmath.exp(2j * math.pi * k / 64) for k in range(64)]

    def ok(r: float) -> bool:
        return all(abs(m(r * w) / (r * w) ** deg - 1.0) <= 0.5 for w in samples)

    r = escape_radius(m)
    while not ok(r):
        r *= 1.25
        if r > 1e30:
            raise OutsideBottcherDomain("no certified Boettcher radius below 1e30")
    while r > 1e-9 and ok(r / 1.25):
        r /= 1.25
    return 2.0 * r


def bottcher(m: AnyMap, z: complex) -> complex:
    """Boettcher coordinate phi(z) = z * prod (P(z_n)/z_n^D)^(D^-(n+1)).

    Principal branches throughout, truncated once a factor is within 1e-15 of
    one.  Requires |z| >= bottcher_radius(m); normalized so phi(z)/z -> 1.
    """
    if not _is_monic(m):
        raise ValueError("Boettcher coordinate requires a monic map")
    z = complex(z)
    r_safe = bottcher_radius(m)
    if abs(z) < r_safe:
        raise OutsideBottcherDomain(f"|z|={abs(z):.6g} < certified radius {r_safe:.6g}")
    return cmath.exp(log_bottcher(m, z))


def log_bottcher(m: AnyMap, z: complex) -> complex:
    """log phi(z) with principal-branch factors; caller guarantees the domain."""
    deg = m.degree
    w = complex(z)
    acc = cmath.log(w)
    scale = 1.0
    for _ in range(200):
        if abs(w) > 1e30:
            break  # remaining factors are below double noise
        pw = m(w)
        scale /= deg
        fac = pw / w**deg
        if not (math.isfinite(fac.real) and math.isfinite(fac.imag)):
            break
        acc += scale * cmath.log(fac)
        w = pw
        if abs(fac - 1.0) < 1e-15:
            break
    return acc


def in_connectedness_locus(
    m: Union[Unicritical, BicriticalOdd],
    max_iter: int = DEFAULT_MAX_ITER,
    escape_radius: Optional[float] = None,
) -> bool:
    """Budget-limited connectedness test: every finite critical orbit stays bounded.

    For the odd family only the orbit of +sqrt(d) is iterated; the orbit of
    -sqrt(d) is its pointwise negation, so it escapes at the same index.
    Verdicts are semi-decisions ("bounded within budget" counts as inside).
    """
    crit = m.critical_points()[0]
    return not iterate(m, crit, max_iter=max_iter, escape_radius=escape_radius).escaped
