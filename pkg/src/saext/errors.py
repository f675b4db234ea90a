"""Exception types raised across the package."""


class SaextError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SaextError, ValueError):
    """Evaluation point outside the potential's interval."""


class PotentialError(SaextError, ValueError):
    """Invalid potential construction (non-finite, uncovered interval, ...)."""


class IntegrationError(SaextError, RuntimeError):
    """The adaptive integrator failed to advance.

    Attributes:
        x_fail: abscissa at which the step size underflowed.
    """

    def __init__(self, message, x_fail=None):
        super().__init__(message)
        self.x_fail = x_fail


class GridError(SaextError, ValueError):
    """Two trajectories do not share sample abscissae."""


class ParityError(SaextError, ValueError):
    """An even potential was required but not provided."""


class DegeneracyError(SaextError, RuntimeError):
    """Near linear dependence detected during orthonormalization."""


class ModeError(SaextError, ValueError):
    """A deficiency basis of the wrong parity mode was supplied."""


class UnitarityError(SaextError, ValueError):
    """A matrix failed unitarity certification."""


class InternalConsistencyError(SaextError, RuntimeError):
    """A property that holds for every valid input was violated (corrupt basis)."""


class UniquenessError(SaextError, RuntimeError):
    """The inverse-map linear system lost uniqueness (near-singular)."""


class LinearIndependenceError(SaextError, RuntimeError):
    """Boundary-data vectors expected to be independent were not."""


class ParameterError(SaextError, ValueError):
    """Out-of-domain parameters for a named boundary-condition family."""


class InvariantViolation(SaextError, RuntimeError):
    """A numerically asserted invariant failed after construction."""
