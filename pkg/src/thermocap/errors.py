"""Exception and warning types shared across the package."""


class ThermocapError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ThermocapError):
    """An input failed validation.

    The ``margin`` attribute, when set, reports by how much the violated
    tolerance was exceeded.
    """

    def __init__(self, message, margin=None):
        if margin is not None:
            message = f"{message} (violation margin {margin:.3e})"
        super().__init__(message)
        self.margin = margin


class NotHermitianError(ValidationError):
    """Matrix is not Hermitian within tolerance."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class NotUnitTraceError(ValidationError):
    """Matrix trace differs from 1 beyond tolerance."""


class NotTracePreservingError(ValidationError):
    """Kraus operators do not satisfy the trace-preservation condition."""


class NotIsometryError(ValidationError):
    """Operator fails V^dag V = 1 within tolerance."""


class InvalidPOVMError(ValidationError):
    """Measurement effects do not resolve the identity."""


class DimensionMismatchError(ValidationError):
    """Operator dimensions are inconsistent."""


class BudgetExceededError(ThermocapError):
    """A requested construction exceeds the configured dimension budget."""


class NotConvergedError(ThermocapError):
    """Iterative solver hit its iteration cap before reaching tolerance.

    Carries the best iterate found so far in the ``result`` attribute.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InfeasibleError(ThermocapError):
    """The optimization problem admits no feasible point."""


class NumericalFailureError(ThermocapError):
    """A numerical routine lost accuracy beyond its self-check tolerance."""


class SpecFormatError(ValidationError):
    """A channel spec file or JSON document is malformed."""


class EmptyConstraintSetWarning(UserWarning):
    """No estimate tuple satisfies the typicality constraint; the operator is zero."""
