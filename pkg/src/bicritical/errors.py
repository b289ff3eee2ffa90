"""Exception types shared across the package."""


class BicriticalError(Exception):
    """Base class for all package-specific errors."""


class ZeroParameter(BicriticalError):
    """The family parameter a (or an affine scale) was zero."""


class DegreeUnsupported(BicriticalError):
    """The operation is only defined for a different degree."""


class NotBicriticalOdd(BicriticalError):
    """Input polynomial is not an odd polynomial with exactly two critical points."""


class ConjugacyNotFound(BicriticalError):
    """No candidate affine map conjugates the two polynomials within tolerance."""


class NonFiniteInput(BicriticalError):
    """An orbit seed or parameter was NaN or infinite."""


class OutsideBottcherDomain(BicriticalError):
    """Requested point lies below the certified Boettcher radius."""


class NewtonFailed(BicriticalError):
    """Newton iteration diverged, stalled or hit a vanishing derivative."""


class PeriodNotMinimal(BicriticalError):
    """A center solver converged onto a parameter of strictly smaller period."""


class DegenerateOrbit(BicriticalError):
    """An intermediate orbit point collided with the origin."""


class NoMatch(BicriticalError):
    """No candidate unicritical center matches the orbit portrait."""


class LandingAmbiguous(BicriticalError):
    """Two fixed points are equally close to the end of a ray trace."""


class SeparatrixIncomplete(BicriticalError):
    """Side classification requested against rays that did not land."""


class NotEscaping(BicriticalError):
    """The marked critical value stayed bounded within the iteration budget."""


class TimeBudgetExceeded(BicriticalError):
    """A wall-clock deadline expired before the computation finished."""
