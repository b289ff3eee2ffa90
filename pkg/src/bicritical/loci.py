"""Parameter-space classification for the polynomial families.

The central operation is ``membership_pm``: a semi-decision for the locus of
odd bicritical parameters whose two critical orbits are separated by the
dynamical rays at angles 0 and 1/2 (the rays landing at the repelling fixed
origin of the monic representative).  Orbits are allowed to pass through the
origin itself; points that land within ``eps0`` of it are snapped there, which
realizes that allowance in floating point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional

from .dynamics import escape_radius, in_connectedness_locus, log_bottcher
from .errors import NewtonFailed, NotEscaping, TimeBudgetExceeded, ZeroParameter
from .family import BicriticalOdd, MonicOdd, Unicritical, monic_roots
from .rays import RayParams, Separatrix, Side, build_separatrix, side_classify

__all__ = [
    "Outcome",
    "Reason",
    "Witness",
    "PmVerdict",
    "in_multibrot",
    "select_branch",
    "membership_pm",
    "parameter_bottcher",
]


class Outcome(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    INDETERMINATE = "indeterminate"


class Reason(enum.Enum):
    ESCAPED = "escaped"
    ZERO_NOT_REPELLING = "zero_not_repelling"
    NO_BRANCH_LANDS = "no_branch_lands"
    SIDE_VIOLATION = "side_violation"
    NEAR_SEPARATRIX = "near_separatrix"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class Witness:
    """First offending orbit point for a side-violation verdict."""

    index: int
    point: complex
    side: Side


@dataclass(frozen=True)
class PmVerdict:
    outcome: Outcome
    s: Optional[complex] = None
    reason: Optional[Reason] = None
    witness: Optional[Witness] = None
    orbit_len: int = 0
    a: complex = 0j
    d: int = 1

    def to_json(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "d": self.d,
            "outcome": self.outcome.value,
            "reason": None if self.reason is None else self.reason.value,
            "s": None if self.s is None else [self.s.real, self.s.imag],
            "witness": None
            if self.witness is None
            else {
                "index": self.witness.index,
                "point": [self.witness.point.real, self.witness.point.imag],
                "side": self.witness.side.value,
            },
            "orbit_len": self.orbit_len,
        }


def in_multibrot(c: complex, degree: int, max_iter: int = 500) -> bool:
    """Budget-limited membership in the connectedness locus of z^degree + c."""
    if degree < 2:
        raise ValueError("degree must be >= 2")
    return in_connectedness_locus(Unicritical(d=degree - 1, c=c), max_iter=max_iter)


def _branch_candidates(a: complex, d: int) -> list[complex]:
    """One representative per distinct monic representative.

    s and -s define the same polynomial, so of the 2d roots of s^(2d) = T(a)
    only the d with principal argument in [0, pi) need testing.
    """
    eps = 1e-12
    return [s for s in monic_roots(d, a) if -eps <= cmath.phase(s) < math.pi - eps]


def _landing_branches(a: complex, d: int, params: RayParams, land_tol: float):
    """Branches whose rays at angles 0 and 1/2 both land at the origin."""
    landed: list[tuple[complex, Separatrix]] = []
    errors = 0
    for s in _branch_candidates(a, d):
        m = MonicOdd(d=d, s=s)
        try:
            sep = build_separatrix(m, params)
        except (NewtonFailed, Exception) as exc:  # separatrix or ray failure
            if isinstance(exc, TimeBudgetExceeded):
                raise
            errors += 1
            continue
        if abs(sep.ray0.landing) <= land_tol and abs(sep.ray_half.landing) <= land_tol:
            landed.append((s, sep))
    return landed, errors


def select_branch(
    a: complex,
    d: int,
    params: RayParams = RayParams(),
    land_tol: float = 1e-6,
) -> Optional[complex]:
    """The unique s among the monic roots whose 0- and 1/2-rays land at 0.

    Returns None when no branch lands (or when two do, which the membership
    pipeline reports as indeterminate rather than guessing).
    """
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    landed, _ = _landing_branches(a, d, params, land_tol)
    if len(landed) == 1:
        return landed[0][0]
    return None


def _critical_orbit(m: MonicOdd, orbit_len: int, eps0: float) -> list[complex]:
    """Forward orbit of +s*sqrt(d) with origin snapping and cycle cutoff.

    A point within eps0 of 0 is snapped to 0 exactly (the map fixes 0, so the
    mathematical orbit stays there).  The orbit is truncated once a point
    revisits an earlier one to 1e-12, since nothing new is classified after a
    cycle closes.
    """
    z = m.critical_points()[0]
    pts = [z]
    for _ in range(orbit_len - 1):
        z = m(z)
        if abs(z) <= eps0:
            z = 0j
        if any(abs(z - w) <= 1e-12 for w in pts):
            pts.append(z)
            break
        pts.append(z)
    return pts


def membership_pm(
    a: complex,
    d: int,
    params: RayParams = RayParams(),
    orbit_len: int = 200,
    eps0: float = 1e-8,
    land_tol: float = 1e-6,
    max_iter: int = 500,
) -> PmVerdict:
    """Semi-decide whether the rays at angles 0, 1/2 separate the critical orbits.

    Pipeline: bounded critical orbits, repelling origin (|a| > 1), a unique
    landing branch s(a), then side classification of both critical orbits
    against the separatrix, skipping points snapped to the origin.  Accept
    requires the +s*sqrt(d) orbit entirely Right and its negation entirely
    Left; Near anywhere is reported as indeterminate, as is anything the ray
    tracer could not settle within budget.
    """
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    a = complex(a)

    def verdict(outcome, **kw):
        return PmVerdict(outcome=outcome, a=a, d=d, **kw)

    if not in_connectedness_locus(BicriticalOdd(d=d, a=a), max_iter=max_iter):
        return verdict(Outcome.REJECT, reason=Reason.ESCAPED)
    mod = abs(a)
    if mod < 1.0 - 1e-9:
        return verdict(Outcome.REJECT, reason=Reason.ZERO_NOT_REPELLING)
    if mod <= 1.0 + 1e-9:
        return verdict(Outcome.INDETERMINATE, reason=Reason.ZERO_NOT_REPELLING)
    landed, errors = _landing_branches(a, d, params, land_tol)
    if len(landed) == 0:
        if errors:
            return verdict(Outcome.INDETERMINATE, reason=Reason.BUDGET_EXHAUSTED)
        return verdict(Outcome.REJECT, reason=Reason.NO_BRANCH_LANDS)
    if len(landed) > 1:
        return verdict(Outcome.INDETERMINATE, reason=Reason.NO_BRANCH_LANDS)
    s, sep = landed[0]
    m = MonicOdd(d=d, s=s)
    right_orbit = _critical_orbit(m, orbit_len, eps0)
    n = len(right_orbit)
    for k in range(n):
        z = right_orbit[k]
        if z == 0:
            continue  # the allowance set: orbits may pass through the origin
        for point, want in ((z, Side.RIGHT), (-z, Side.LEFT)):
            side = side_classify(point, sep)
            if side is Side.NEAR:
                return verdict(
                    Outcome.INDETERMINATE,
                    reason=Reason.NEAR_SEPARATRIX,
                    s=s,
                    orbit_len=n,
                    witness=Witness(index=k, point=point, side=side),
                )
            if side is not want:
                return verdict(
                    Outcome.REJECT,
                    reason=Reason.SIDE_VIOLATION,
                    s=s,
                    orbit_len=n,
                    witness=Witness(index=k, point=point, side=side),
                )
    return verdict(Outcome.ACCEPT, s=s, orbit_len=n)


def parameter_bottcher(s: complex, d: int, max_iter: int = 500) -> complex:
    """Boettcher value of the marked critical value P_s(-s*sqrt(d)).

    The critical value is iterated into the certified Boettcher domain, the
    logarithm of the coordinate is computed there by the principal-branch
    product, and the functional equation log phi(z) = log phi(P(z))/D is pulled
    back along the orbit with the branch chosen to keep the argument aligned
    with the orbit point.  |result| > 1 exactly when the critical value
    escapes; bounded critical values raise NotEscaping.
    """
    m = MonicOdd(d=d, s=s)
    v = m(-m.s * math.sqrt(d))
    deg_m = m.degree
    r_esc = escape_radius(m)

    def in_product_domain(z: complex) -> bool:
        # entry condition for the principal-branch product: past the escape
        # radius the orbit doubles per step, so factors only tighten from here
        return abs(z) >= r_esc and abs(m(z) / z**deg_m - 1.0) <= 0.4

    orbit = [v]
    z = v
    for _ in range(max_iter):
        if in_product_domain(z):
            break
        z = m(z)
        orbit.append(z)
    else:
        raise NotEscaping(
            f"critical value stayed below the Boettcher domain for {max_iter} iterations"
        )
    if not in_product_domain(orbit[-1]):
        raise NotEscaping("critical value did not reach the Boettcher domain")
    deg = m.degree
    log_phi = log_bottcher(m, orbit[-1])
    for z in reversed(orbit[:-1]):
        base = log_phi / deg
        want = cmath.phase(z)
        k_best = min(
            range(deg),
            key=lambda k: abs(_wrap(base.imag + 2.0 * math.pi * k / deg - want)),
        )
        log_phi = base + 2j * math.pi * k_best / deg
        log_phi = complex(log_phi.real, _wrap(log_phi.imag - want) + want)
    return cmath.exp(log_phi)


def _wrap(x: float) -> float:
    """Wrap to (-pi, pi]."""
    y = math.fmod(x + math.pi, 2.0 * math.pi)
    if y <= 0:
        y += 2.0 * math.pi
    return y - math.pi
