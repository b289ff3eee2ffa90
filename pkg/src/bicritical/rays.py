"""Exact angle combinatorics and dynamical-ray tracing.

Angles are exact rationals in [0,1) turns.  Rays are traced by potential
descent: starting on a high equipotential, the target potential is lowered by a
fixed ratio per level and each point is found by Newton on the iterated
Boettcher equation P^n(z) = w^(D^n), where the depth n keeps the target far
outside the Julia set.  Target arguments D^n * theta are reduced mod 1 in exact
integer arithmetic, which keeps deep levels meaningful.
"""

from __future__ import annotations

import cmath
import enum
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Union

import numpy as np

from .dynamics import AnyMap, green
from .errors import (
    LandingAmbiguous,
    NewtonFailed,
    SeparatrixIncomplete,
    TimeBudgetExceeded,
)
from .family import MonicOdd, Unicritical

__all__ = [
    "Angle",
    "RayParams",
    "RayStatus",
    "RayTrace",
    "Separatrix",
    "Side",
    "angle_map",
    "rotate_label",
    "cut_point_angles",
    "tip_angles",
    "trace_ray",
    "locate_beta",
    "build_separatrix",
    "side_classify",
]


@dataclass(frozen=True)
class Angle:
    """Reduced rational angle num/den in [0,1) turns."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        num = self.num % self.den
        g = gcd(num, self.den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", self.den // g)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        num, _, den = text.partition("/")
        return cls(int(num), int(den) if den else 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __lt__(self, other: "Angle") -> bool:
        return self.value < other.value


def angle_map(theta: Angle, degree: int) -> Angle:
    """Multiplication by the degree, mod 1, exactly."""
    if degree < 2:
        raise ValueError("degree must be >= 2")
    return Angle(theta.num * degree % theta.den, theta.den)


def _angle_power(theta: Angle, degree: int, n: int) -> Angle:
    """degree^n * theta mod 1 in one step (modular exponentiation)."""
    return Angle(theta.num * pow(degree, n, theta.den) % theta.den, theta.den)


def rotate_label(theta: Angle, j: int, d: int) -> Angle:
    """theta + j/(2d) mod 1 exactly (monic-representative relabeling)."""
    f = theta.value + Fraction(j, 2 * d)
    f %= 1
    return Angle(f.numerator, f.denominator)


def cut_point_angles(d: int, k: int) -> tuple[list[Angle], list[Angle]]:
    """Angle pairs landing together at a critical value after k steps onto 0.

    First list: theta with (2d+1)^(k-1) theta = 0 mod 1; second list: theta
    with (2d+1)^(k-1) theta = 1/2 mod 1.  Both sorted ascending.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = (2 * d + 1) ** (k - 1)
    zero_side = sorted(Angle(i, q) for i in range(q))
    half_side = sorted(Angle(2 * i + 1, 2 * q) for i in range(q))
    return zero_side, half_side


def tip_angles(d: int, n: int) -> list[Angle]:
    """Reduced angles i/d^n, 0 < i < d^n, not expressible with a smaller n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Angle(i, d**n) for i in range(1, d**n) if i % d != 0]


@dataclass(frozen=True)
class RayParams:
    """Knobs for potential-descent tracing."""

    eta: float = 8.0
    step_ratio: float = 0.5
    max_levels: int = 140
    newton_tol: float = 1e-9
    newton_max: int = 40
    anchor_tol: float = 1e-6
    deadline: Optional[float] = None  # epoch seconds; None = no wall-clock budget

    def __post_init__(self):
        if not (self.eta > 0 and 0 < self.step_ratio < 1):
            raise ValueError("need eta > 0 and step_ratio in (0,1)")
        if min(self.max_levels, self.newton_max) < 1 or self.newton_tol <= 0:
            raise ValueError("budgets must be positive")


class RayStatus(enum.Enum):
    LANDED = "landed"
    BUDGET_EXHAUSTED = "budget"
    NEWTON_FAILED = "newton_failed"


@dataclass(frozen=True)
class RayTrace:
    """Polyline approximation of a dynamical ray, ordered by decreasing potential."""

    angle: Angle
    points: tuple[complex, ...]
    landing: Optional[complex]
    status: RayStatus
    potentials: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {
            "angle": str(self.angle),
            "points": [[z.real, z.imag] for z in self.points],
            "landing": None if self.landing is None else [self.landing.real, self.landing.imag],
            "status": self.status.value,
        }


def _angle_orbit_type(theta: Angle, degree: int) -> tuple[int, int]:
    """(preperiod, period) of theta under multiplication by the degree."""
    seen: dict[Angle, int] = {}
    th = theta
    idx = 0
    while th not in seen:
        seen[th] = idx
        th = angle_map(th, degree)
        idx += 1
    first = seen[th]
    return first, idx - first


_ANCHOR_DEGREE_CAP = 250


@lru_cache(maxsize=256)
def _anchor_points(m: AnyMap, preperiod: int, period: int) -> tuple[complex, ...]:
    """Possible landing points for an angle of the given orbit type.

    Roots of P^(q+p)(z) - P^q(z): points whose q-th image is p-periodic.
    Composition degree is capped; beyond the cap the fixed/prefixed set
    (q=1, p=1) is used when possible, else no anchors are available.
    """
    deg = m.degree
    if deg ** (preperiod + period) > _ANCHOR_DEGREE_CAP:
        if (preperiod, period) != (1, 1) and deg**2 <= _ANCHOR_DEGREE_CAP:
            return _anchor_points(m, 1, 1)
        return ()
    coeffs = np.array(m.coefficients(), dtype=complex)  # ascending
    poly = np.polynomial.polynomial.Polynomial(coeffs)
    ident = np.polynomial.polynomial.Polynomial([0.0, 1.0])
    low = ident
    for _ in range(preperiod):
        low = poly(low)
    high = low
    for _ in range(period):
        high = poly(high)
    roots = (high - low).roots()
    return tuple(complex(r) for r in roots if abs(r) < 1e6)


_LEVEL_POT = 8.0  # window floor for the multiplied potential t * D^n


def _iterate_with_derivative(m: AnyMap, z: complex, n: int) -> tuple[complex, complex]:
    w, dw = z, 1.0 + 0j
    for _ in range(n):
        dw = m.derivative(w) * dw
        w = m(w)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            return w, dw
    return w, dw


def _newton_solve(m: AnyMap, n: int, target: complex, seed: complex, newton_max: int):
    """Newton on P^n(z) = target; None on divergence or degenerate derivative."""
    z = seed
    for _ in range(newton_max):
        w, dw = _iterate_with_derivative(m, z, n)
        if dw == 0 or not (math.isfinite(abs(w)) and math.isfinite(abs(dw))):
            return None
        step = (w - target) / dw
        z -= step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
        if abs(step) <= 1e-13 * max(1.0, abs(z)):
            return z
    return None


def _ray_target(theta: Angle, deg: int, n: int, t: float) -> complex:
    ang = 2.0 * math.pi * float(_angle_power(theta, deg, n))
    return cmath.exp(complex(t * deg**n, ang))


def trace_ray(m: Union[MonicOdd, Unicritical], theta: Angle, params: RayParams = RayParams()) -> RayTrace:
    """Trace the dynamical ray of a monic map at an exact angle.

    Each level solves P^n(z) = exp(t D^n + 2 pi i D^n theta) by Newton, with
    the depth n keeping the multiplied potential in [8, 8D) and the target
    argument reduced mod 1 exactly.  Seeds extrapolate the polyline
    geometrically; if a jump fails, the potential interval is subdivided and
    continued in small steps.  Landing is declared when the last three points
    have pairwise distance below newton_tol and the trace end sits within
    anchor_tol of a fixed or prefixed point (a two-factor test that guards
    against stalls).  On Newton divergence the partial trace is attached to
    the raised error.
    """
    if abs(m.coefficients()[-1] - 1.0) > 1e-9:
        raise ValueError("ray tracing requires a monic map")
    deg = m.degree
    anchors = _anchor_points(m, *_angle_orbit_type(theta, deg))
    points: list[complex] = []
    potentials: list[float] = []

    def fail():
        return NewtonFailed(
            RayTrace(
                angle=theta,
                points=tuple(points),
                landing=None,
                status=RayStatus.NEWTON_FAILED,
                potentials=tuple(potentials),
            )
        )

    def stalled():
        # double precision cannot resolve deeper levels; report the budget
        return RayTrace(
            angle=theta,
            points=tuple(points),
            landing=None,
            status=RayStatus.BUDGET_EXHAUSTED,
            potentials=tuple(potentials),
        )

    # bootstrap far out, where phi is the identity to ~1e-8
    t_prev = max(10.0, params.eta)
    z_prev = _newton_solve(
        m, 0, cmath.exp(complex(t_prev, 2.0 * math.pi * float(theta))),
        cmath.exp(complex(t_prev, 2.0 * math.pi * float(theta))),
        params.newton_max,
    )
    if z_prev is None:
        raise fail()

    t = params.eta
    for _level in range(params.max_levels):
        if params.deadline is not None and time.monotonic() > params.deadline:
            raise TimeBudgetExceeded("ray trace exceeded its wall-clock budget")
        n = 0
        if t < _LEVEL_POT:
            n = math.ceil(math.log(_LEVEL_POT / t) / math.log(deg))
        target = _ray_target(theta, deg, n, t)
        znew = None
        # fast path: once the polyline contracts, geometric extrapolation
        # seeds land inside the quadratic Newton basin
        if len(points) >= 3 and points[-2] != points[-3]:
            d1 = points[-1] - points[-2]
            rho = d1 / (points[-2] - points[-3])
            if abs(rho) <= 0.6 and abs(rho * d1) <= 0.3 * max(1.0, abs(points[-1])):
                cand = _newton_solve(m, n, target, points[-1] + rho * d1, 12)
                if cand is not None and _potential_ok(m, cand, t):
                    znew = cand
        if znew is None:
            # continuation in substeps small enough that each Newton solve
            # starts inside the basin of the correct sheet
            z_sub = z_prev
            substeps = max(1, math.ceil((t_prev - t) * deg**n / 1.5))
            for j in range(1, substeps + 1):
                t_j = t_prev + (t - t_prev) * j / substeps
                z_sub = _newton_solve(
                    m, n, _ray_target(theta, deg, n, t_j), z_sub, params.newton_max
                )
                if z_sub is None:
                    if t < 1e-8 and len(points) >= 3:
                        return stalled()
                    raise fail()
            if not _potential_ok(m, z_sub, t):
                raise fail()
            znew = z_sub
        points.append(znew)
        potentials.append(t)
        t_prev, z_prev = t, znew
        if len(points) >= 3:
            a, b, c = points[-3], points[-2], points[-1]
            diam = max(abs(a - b), abs(b - c), abs(a - c))
            if diam < params.newton_tol and anchors:
                near = min(abs(c - p) for p in anchors)
                if near < params.anchor_tol:
                    return RayTrace(
                        angle=theta,
                        points=tuple(points),
                        landing=c,
                        status=RayStatus.LANDED,
                        potentials=tuple(potentials),
                    )
        t *= params.step_ratio
    return RayTrace(
        angle=theta,
        points=tuple(points),
        landing=None,
        status=RayStatus.BUDGET_EXHAUSTED,
        potentials=tuple(potentials),
    )


def _potential_ok(m: AnyMap, z: complex, t: float) -> bool:
    """Guard against Newton converging onto an aliased sheet.

    Below t ~ 1e-6 double-precision orbits of near-Julia points no longer
    measure the potential reliably, so the check is skipped there.
    """
    if t < 1e-6:
        return True
    return abs(green(m, z).g - t) <= 1e-3 * t


def locate_beta(u: Unicritical, params: RayParams = RayParams()) -> complex:
    """Landing point of the angle-0 ray: the fixed point nearest the trace end.

    The returned root of z^(d+1) + c - z is Newton-polished to residual 1e-10.
    """
    trace = trace_ray(u, Angle(0, 1), params)
    if not trace.points:
        raise NewtonFailed(trace)
    tip = trace.points[-1]
    coeffs = [u.c, -1.0] + [0.0] * (u.degree - 2) + [1.0]  # z^D - z + c, ascending
    roots = np.polynomial.polynomial.Polynomial(np.array(coeffs, dtype=complex)).roots()
    order = sorted(roots, key=lambda r: abs(r - tip))
    if len(order) > 1 and abs(order[1] - tip) < 1e-6 and abs(order[0] - tip) < 1e-6:
        raise LandingAmbiguous(
            f"fixed points {order[0]:.8f} and {order[1]:.8f} both within 1e-6 of the trace end"
        )
    beta = complex(order[0])
    for _ in range(8):
        f = u(beta) - beta
        df = u.derivative(beta) - 1.0
        if df == 0:
            break
        beta -= f / df
    if abs(u(beta) - beta) > 1e-10:
        raise NewtonFailed(f"fixed-point residual {abs(u(beta) - beta):.3e} above 1e-10")
    return beta


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"
    NEAR = "near"


@dataclass(frozen=True)
class Separatrix:
    """The landed rays at angles 0 and 1/2 plus their common landing point.

    right_ref is the point calibrating which complementary component counts as
    Right (the critical point +s*sqrt(d) for a monic odd map).
    """

    ray0: RayTrace
    ray_half: RayTrace
    pivot: complex
    right_ref: complex


def build_separatrix(m: MonicOdd, params: RayParams = RayParams()) -> Separatrix:
    ray0 = trace_ray(m, Angle(0, 1), params)
    ray_half = trace_ray(m, Angle(1, 2), params)
    if ray0.status is not RayStatus.LANDED or ray_half.status is not RayStatus.LANDED:
        raise SeparatrixIncomplete("both rays must land to form a separatrix")
    pivot = (ray0.landing + ray_half.landing) / 2
    return Separatrix(ray0=ray0, ray_half=ray_half, pivot=pivot, right_ref=m.critical_points()[0])


@lru_cache(maxsize=64)
def _separatrix_geometry(sep: Separatrix):
    """Closed polygon (outer arc closure) and default Near band for a separatrix."""
    fwd = list(sep.ray0.points)  # decreasing potential: far -> pivot
    bwd = list(sep.ray_half.points)
    poly = fwd + [sep.pivot] + bwd[::-1]
    r_out = 0.5 * (abs(fwd[0]) + abs(bwd[0]))
    a0 = cmath.phase(bwd[0])
    a1 = cmath.phase(fwd[0])
    sweep = (a1 - a0) % (2 * math.pi)
    n_arc = max(8, int(sweep / math.radians(5.0)))
    arc = [r_out * cmath.exp(1j * (a0 + sweep * k / n_arc)) for k in range(1, n_arc)]
    vertices = np.array(poly + arc, dtype=complex)
    # polyline for distance tests: the two rays joined through the pivot only
    chain = np.array(poly, dtype=complex)
    gaps = np.abs(np.diff(chain))
    # spacing near the pivot controls how fine a classification is meaningful
    eps_default = 2.0 * float(gaps[min(len(gaps) - 1, len(fwd) - 1)]) if len(gaps) else 0.0
    return vertices, chain, eps_default


def _distance_to_polyline(z: complex, chain: np.ndarray) -> float:
    a = chain[:-1]
    b = chain[1:]
    ab = b - a
    denom = (ab * ab.conjugate()).real
    tpar = np.clip(((z - a) * ab.conjugate()).real / np.where(denom == 0, 1.0, denom), 0.0, 1.0)
    proj = a + tpar * ab
    return float(np.min(np.abs(z - proj)))


def _crossing_parity(z: complex, vertices: np.ndarray) -> int:
    """Even-odd rule with a horizontal probe towards +infinity."""
    x, y = z.real, z.imag
    a = vertices
    b = np.roll(vertices, -1)
    ya, yb = a.imag, b.imag
    straddle = (ya > y) != (yb > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = a.real + (y - ya) * (b.real - a.real) / (yb - ya)
    hits = straddle & (xs > x)
    return int(np.count_nonzero(hits) & 1)


def side_classify(z: complex, sep: Separatrix, eps_sep: Optional[float] = None) -> Side:
    """Classify a point against the separatrix by crossing parity.

    Points within eps_sep of the ray polyline report Near; otherwise the
    component containing right_ref is Right.  eps_sep defaults to twice the
    polyline spacing near the pivot, so classification is never finer than the
    trace resolution.
    """
    if sep.ray0.status is not RayStatus.LANDED or sep.ray_half.status is not RayStatus.LANDED:
        raise SeparatrixIncomplete("separatrix rays did not land")
    vertices, chain, eps_default = _separatrix_geometry(sep)
    eps = eps_default if eps_sep is None else float(eps_sep)
    if _distance_to_polyline(z, chain) < eps:
        return Side.NEAR
    right_parity = _crossing_parity(sep.right_ref, vertices)
    return Side.RIGHT if _crossing_parity(z, vertices) == right_parity else Side.LEFT
