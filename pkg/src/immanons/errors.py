"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """Input size exceeds a supported bound."""
