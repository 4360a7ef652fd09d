"""Exception types shared across the toolkit.

Every failure mode that callers are expected to branch on gets its own
class; all inherit from OrbitmultError so `except OrbitmultError` catches
any toolkit-level failure without masking programming errors.
"""


class OrbitmultError(Exception):
    """Base class for all toolkit errors."""


class DegreeCapExceeded(OrbitmultError):
    """Iterated-composition degree n**m exceeds the configured cap."""

    def __init__(self, degree: int, cap: int):
        super().__init__(f"composition degree {degree} exceeds cap {cap}")
        self.degree = degree
        self.cap = cap


class OrbitEscape(OrbitmultError):
    """An orbit left the escape radius (diverges to infinity).

    Carries the finite prefix of the orbit in `partial_orbit`.
    """

    def __init__(self, partial_orbit):
        super().__init__(
            f"orbit escaped to infinity after {len(partial_orbit) - 1} steps"
        )
        self.partial_orbit = list(partial_orbit)


class NoConvergence(OrbitmultError):
    """An iterative solve ran out of iterations."""

    def __init__(self, message: str, worst_residual: float | None = None):
        if worst_residual is not None:
            message = f"{message} (worst residual {worst_residual:.3e})"
        super().__init__(message)
        self.worst_residual = worst_residual


class DerivativeVanished(OrbitmultError):
    """Newton step undefined: derivative vanished at the iterate."""


class AmbiguousGrouping(OrbitmultError):
    """Nearest-root matching during orbit grouping was not decisive."""


class InsufficientOrbits(OrbitmultError):
    """Fewer usable orbits of some exact period than the period vector demands."""

    def __init__(self, period: int, needed: int, available: int):
        super().__init__(
            f"period {period}: need {needed} distinct non-multiple orbits, "
            f"found {available}"
        )
        self.period = period
        self.needed = needed
        self.available = available


class MultipleOrbitOnly(OrbitmultError):
    """Every orbit of some requested exact period is multiple (degenerate)."""

    def __init__(self, period: int):
        super().__init__(f"period {period}: only multiple orbits exist")
        self.period = period


class ParabolicObstruction(OrbitmultError):
    """A tracked multiplier is too close to 1; implicit differentiation degenerates."""


class UnitMultiplier(OrbitmultError):
    """A fixed-point multiplier is within tolerance of 1."""


class AllTrialsFailed(OrbitmultError):
    """Every certificate trial failed; `taxonomy` maps failure kind to count."""

    def __init__(self, taxonomy: dict):
        super().__init__(f"all trials failed: {dict(taxonomy)}")
        self.taxonomy = dict(taxonomy)


class SingularJacobian(OrbitmultError):
    """Multiplier-map Jacobian numerically singular at the current point."""


class MaxIterExceeded(OrbitmultError):
    """Damped Newton inversion did not converge within the iteration budget."""


class OrbitLost(OrbitmultError):
    """A re-refined periodic point jumped to a different orbit."""


class SeedSearchFailed(OrbitmultError):
    """Random multistart exhausted its sample budget without a usable seed."""


class SatelliteNotFound(OrbitmultError):
    """No (attracting) satellite cycle found within the search budget."""


class PersistenceLost(OrbitmultError):
    """A previously attracting orbit stopped being attracting during a perturbation."""


class PoleProximity(OrbitmultError):
    """Evaluation point too close to the pole of the disk model map."""
