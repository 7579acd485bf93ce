"""Exception types shared across the package."""


class BichromaError(Exception):
    """Base class for all package errors."""


class SingularDenominator(BichromaError, ZeroDivisionError):
    """An effective Hamiltonian was requested exactly on a regime boundary."""


class DomainError(BichromaError, ValueError):
    """A closed-form boundary is undefined (negative radicand, side condition violated)."""


class DimensionMismatch(BichromaError, ValueError):
    pass


class NonHermitianError(BichromaError, ValueError):
    pass


class NormError(BichromaError, ValueError):
    """State amplitudes are not normalized."""


class StepSizeUnderflow(BichromaError, RuntimeError):
    """The adaptive integrator could not meet its tolerance."""


class ConvergenceFailure(BichromaError, RuntimeError):
    pass


class LostBranch(BichromaError, RuntimeError):
    """Adiabatic tracking could not identify the continued eigenvector."""


class ValidationError(BichromaError, ValueError):
    """Invalid run configuration; raised before any computation starts."""


class AmbiguousContinuation(UserWarning):
    """Sheet labelling at a grid node was not clear-cut (node is flagged, not fatal)."""
