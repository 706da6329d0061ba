"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """Mismatched shapes (variable count or degree) between operands."""


class DomainError(ValueError):
    """Parameters outside the documented domain of an operation."""


class SizeBudgetError(RuntimeError):
    """A combinatorial size bound was exceeded; nothing was computed."""


class ConsistencyError(RuntimeError):
    """An internal exactness check failed; signals a bug, not bad input."""


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
