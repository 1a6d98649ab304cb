"""Exception hierarchy shared by all modules."""


class IsingExactError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsingExactError, ValueError):
    """Input outside the mathematical domain of an operation."""


class CapacityError(IsingExactError, ValueError):
    """Requested size exceeds the supported cost bound."""


class UnsupportedRepresentationError(IsingExactError, ValueError):
    """The requested output form cannot represent the input."""


class RangeError(IsingExactError, ValueError):
    """Evaluation point lies outside a computed grid."""


class PropagationError(IsingExactError, ArithmeticError):
    """A recurrence step needed to divide by a vanishing quantity."""

    def __init__(self, message: str, location=None):
        super().__init__(message)
        self.location = location


class NumericError(IsingExactError, ArithmeticError):
    """An iterative numerical method failed to converge."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ContractError(IsingExactError, AssertionError):
    """A post-condition or identity check did not hold."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index
