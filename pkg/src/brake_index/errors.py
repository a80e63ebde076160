"""Exception hierarchy shared by all modules."""


class BrakeIndexError(Exception):
    """Base class for every error raised by this package."""


class DegenerateEndpoint(BrakeIndexError):
    """The V block of a symplectic matrix is (numerically) singular."""


class InvalidCoefficient(BrakeIndexError):
    """A coefficient matrix B(t) is not symmetric or has the wrong shape."""


class NumericalFailure(BrakeIndexError):
    """Non-finite values or an exhausted refinement budget."""


class DomainMismatch(BrakeIndexError):
    """A path is defined on the wrong time interval."""


class IntegralDefect(BrakeIndexError):
    """A winding number that should be an integer is not close to one."""


class PerturbationFailure(BrakeIndexError):
    """No perturbation in the schedule produced a stable nondegenerate index."""


class UnstableTruncation(BrakeIndexError):
    """A Galerkin count changed between truncations m and 2m."""


class CountMismatch(BrakeIndexError):
    """Eigenvalue counts disagree with the index pair at the doubled truncation."""


class NoConvergence(BrakeIndexError):
    """Newton iteration failed for one seed."""


class AllSeedsFailed(BrakeIndexError):
    """Newton iteration failed for every seed."""


class BoundaryViolation(BrakeIndexError):
    """A half-period trajectory does not start and end in L0."""


class VerificationFailure(BrakeIndexError):
    """An index identity or inequality failed; carries the full report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(BrakeIndexError):
    """Invalid experiment configuration."""


class SolverFailure(BrakeIndexError):
    """The critical-point search produced no admissible nonconstant solution."""
