"""Exception hierarchy for construction and verification failures."""


class GrayforgeError(ValueError):
    """Base class for domain errors."""


class DegenerateParameterError(GrayforgeError):
    """A closed form hits a singular denominator, pole or non-simple root."""


class InfeasibleParametersError(GrayforgeError):
    """A feasibility certificate failed for the requested parameters."""

    def __init__(self, message: str, certificate: str = "feasibility"):
        super().__init__(message)
        self.certificate = certificate


class RankDeficientError(InfeasibleParametersError):
    """The boundary linear system is singular."""

    def __init__(self, message: str):
        super().__init__(message, certificate="rank")


class ConvergenceError(GrayforgeError):
    """An integrator or root search did not reach a conclusive answer."""


class BranchViolationError(GrayforgeError):
    """The warping function g would vanish inside the domain."""


class ChartDomainError(GrayforgeError):
    """A point or finite-difference stencil leaves the coordinate chart."""
