"""Exception hierarchy shared by all specdeg modules."""


class SpecdegError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SpecdegError):
    """Shapes of the supplied matrices/vectors do not agree."""


class DegenerateInputError(SpecdegError):
    """Input is degenerate for the requested operation (e.g. zero polynomial)."""


class NotARootError(SpecdegError):
    """The supplied value is not a root of the polynomial within tolerance."""


class NormalizationError(SpecdegError):
    """A vector expected to be (near) unit length is not normalizable."""


class InvarianceError(SpecdegError):
    """Numerical invariance check of a restricted operator failed."""


class NotIsolatedError(SpecdegError):
    """Point degree requested at an eigenpoint that is not isolated."""


class DegenerateDifferentialError(SpecdegError):
    """The differential at the eigenpoint is singular; the oracle does not apply."""


class AdmissibilityError(SpecdegError):
    """An interval endpoint is (numerically) an eigenvalue."""


class UnsupportedMapError(SpecdegError):
    """Operation requires a different kind of nonlinear map."""


class PreconditionError(SpecdegError):
    """A mathematical precondition of the operation is violated."""


class CorrectorFailureError(SpecdegError):
    """Newton corrector did not converge."""


class BranchStartError(SpecdegError):
    """Branch tracing cannot start: the augmented Jacobian is singular there."""


class InconclusiveBranchError(SpecdegError):
    """A stalled branch cannot be classified."""


class ProblemFileError(SpecdegError):
    """A problem file failed to parse or validate."""
