"""Exception types raised by the library.

Everything derives from ChiAuditError so callers can catch the whole family;
most classes also derive from ValueError because they signal bad input values.
"""


class ChiAuditError(Exception):
    """Base class for all errors raised by this package."""


class TableError(ChiAuditError, ValueError):
    """A contingency table failed validation."""


class NegativeEntryError(TableError):
    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"entry at row {row}, column {col} is negative")


class NonFiniteEntryError(TableError):
    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"entry at row {row}, column {col} is not finite")


class TooFewRowsError(TableError):
    def __init__(self, rows: int):
        self.rows = rows
        super().__init__(f"table has {rows} row(s); at least 2 are required")


class TooFewColumnsError(TableError):
    def __init__(self, cols: int):
        self.cols = cols
        super().__init__(f"table has {cols} column(s); at least 2 are required")


class ZeroRowSumError(TableError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(
            f"row {row} sums to zero; remove that row before testing"
        )


class ZeroColumnSumError(TableError):
    def __init__(self, col: int):
        self.col = col
        super().__init__(
            f"column {col} sums to zero; remove that column before testing"
        )


class DomainError(ChiAuditError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonPositiveScaleError(DomainError):
    def __init__(self, scale):
        self.scale = scale
        super().__init__(f"scale factor must be finite and > 0, got {scale!r}")


class NumericalError(ChiAuditError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class NotNormalizedError(DomainError):
    def __init__(self, total: float):
        self.total = total
        super().__init__(
            f"joint frequencies must sum to 1, got {total!r}"
        )


class ZeroMarginalError(ChiAuditError, ValueError):
    def __init__(self, axis: str, index: int):
        self.axis = axis
        self.index = index
        super().__init__(f"{axis} marginal {index} is zero")


class DegenerateProbabilitiesError(ChiAuditError, ValueError):
    """Null sampling cannot produce a valid table from these probabilities."""


class UnknownDatasetError(ChiAuditError, ValueError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(
            f"unknown dataset {name!r}; available: {', '.join(known)}"
        )


class CsvParseError(ChiAuditError, ValueError):
    def __init__(self, message: str, line: int | None = None,
                 col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", field {col})" if col is not None else ")")
        super().__init__(message + where)


class TooFewTrialsWarning(UserWarning):
    """Monte Carlo calibration was run with too few trials to be reliable."""
