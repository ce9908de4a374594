"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(ArithmeticError):
    """A series or continued fraction failed to converge within its iteration cap."""


class BudgetExceededError(RuntimeError):
    """An inversion ran out of quadrature panels before reaching its truncation criterion."""


class InversionError(ArithmeticError):
    """An inverted probability or density falls outside its range by more than the tolerance."""
