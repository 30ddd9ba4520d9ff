"""Exception hierarchy for dynpart."""


class DynpartError(Exception):
    """Base class for all library errors."""


class ModelSpecError(DynpartError, ValueError):
    """Invalid model parameters (N too small, g = 0, unknown model name)."""


class NormalizationError(DynpartError, ValueError):
    pass


class NegativeWeightError(DynpartError, ValueError):
    pass


class CapExceeded(DynpartError, ValueError):
    """System size above the enumeration cap."""


class NonConvergence(DynpartError, ArithmeticError):
    """Root polishing did not reach the requested residual."""


class StepTooLarge(DynpartError, ValueError):
    pass


class NotCritical(DynpartError, ValueError):
    """The requested angle is not a predicted critical time."""


class InsufficientPoints(DynpartError, ValueError):
    pass


class BoundViolation(DynpartError, ArithmeticError):
    """A measured orthogonalization time fell below a speed-limit bound."""
