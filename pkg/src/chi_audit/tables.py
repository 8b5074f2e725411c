"""Contingency tables: validated storage, margins, expected counts, scaling.

A table holds non-negative finite float entries with at least two rows and
two columns, and every row and column must have positive sum. Margins and the
expected matrix under homogeneity are derived quantities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    NegativeEntryError,
    NonFiniteEntryError,
    NonPositiveScaleError,
    TableError,
    TooFewColumnsError,
    TooFewRowsError,
    ZeroColumnSumError,
    ZeroRowSumError,
)

__all__ = [
    "Margins",
    "ContingencyTable",
    "make_table",
    "expected",
    "scale",
    "rows_proportional",
]


@dataclass(frozen=True)
class Margins:
    """Row sums, column sums, and the grand total of a table."""

    row_sums: np.ndarray
    col_sums: np.ndarray
    grand_total: float


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class ContingencyTable:
    """An m x n table of non-negative counts (or measured frequencies).

    Entries are stored as float64. Validation happens on construction:
    negative or non-finite entries, fewer than two rows or columns, and
    all-zero rows or columns are rejected with specific exceptions that name
    the offending cell or line.
    """

    __slots__ = ("_entries", "_margins", "_row_labels", "_col_labels")

    def __init__(
        self,
        entries,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ):
        try:
            arr = np.array(entries, dtype=float, copy=True)
        except (ValueError, TypeError) as e:
            raise TableError(
                f"entries must form a rectangular numeric array: {e}"
            ) from None
        if arr.ndim != 2:
            raise TableError(
                f"entries must form a 2-D rectangular array, got ndim={arr.ndim}"
            )
        m, n = arr.shape
        if m < 2:
            raise TooFewRowsError(m)
        if n < 2:
            raise TooFewColumnsError(n)

        bad = np.argwhere(~np.isfinite(arr))
        if bad.size:
            i, j = bad[0]
            raise NonFiniteEntryError(int(i), int(j))
        bad = np.argwhere(arr < 0.0)
        if bad.size:
            i, j = bad[0]
            raise NegativeEntryError(int(i), int(j))

        row_sums = arr.sum(axis=1)
        for i in range(m):
            if row_sums[i] <= 0.0:
                raise ZeroRowSumError(i)
        col_sums = arr.sum(axis=0)
        for j in range(n):
            if col_sums[j] <= 0.0:
                raise ZeroColumnSumError(j)

        if row_labels is not None:
            row_labels = tuple(str(s) for s in row_labels)
            if len(row_labels) != m:
                raise TableError(
                    f"got {len(row_labels)} row labels for {m} rows"
                )
        if col_labels is not None:
            col_labels = tuple(str(s) for s in col_labels)
            if len(col_labels) != n:
                raise TableError(
                    f"got {len(col_labels)} column labels for {n} columns"
                )

        self._entries = _freeze(arr)
        self._margins = Margins(
            row_sums=_freeze(row_sums),
            col_sums=_freeze(col_sums),
            grand_total=float(arr.sum()),
        )
        self._row_labels = row_labels
        self._col_labels = col_labels

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self) -> tuple[int, int]:
        return self._entries.shape

    @property
    def n_rows(self) -> int:
        return self._entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self._entries.shape[1]

    @property
    def margins(self) -> Margins:
        return self._margins

    @property
    def row_sums(self) -> np.ndarray:
        return self._margins.row_sums

    @property
    def col_sums(self) -> np.ndarray:
        return self._margins.col_sums

    @property
    def grand_total(self) -> float:
        return self._margins.grand_total

    @property
    def row_labels(self) -> tuple[str, ...] | None:
        return self._row_labels

    @property
    def col_labels(self) -> tuple[str, ...] | None:
        return self._col_labels

    def __repr__(self) -> str:
        m, n = self.shape
        return f"ContingencyTable({m}x{n}, total={self.grand_total:g})"


def make_table(
    entries,
    row_labels: Sequence[str] | None = None,
    col_labels: Sequence[str] | None = None,
) -> ContingencyTable:
    """Validate entries and build a ContingencyTable."""
    return ContingencyTable(entries, row_labels=row_labels, col_labels=col_labels)


def expected(table: ContingencyTable) -> np.ndarray:
    """Expected counts under homogeneity: E[i, j] = R_i * C_j / T."""
    margins = table.margins
    return np.outer(margins.row_sums, margins.col_sums) / margins.grand_total


def scale(table: ContingencyTable, factor: float) -> ContingencyTable:
    """Return a new table with every entry multiplied by ``factor``.

    The factor must be finite and strictly positive, which keeps the result a
    valid table with the same zero pattern and proportionality structure.
    """
    f = float(factor)
    if not np.isfinite(f) or f <= 0.0:
        raise NonPositiveScaleError(factor)
    return ContingencyTable(
        table.entries * f,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
    )


def rows_proportional(table: ContingencyTable, rel_tol: float = 0.0) -> bool:
    """True when all rows are proportional to each other.

    Proportional rows, proportional columns, and O == E are equivalent, so
    this is decided cell-wise as |O - E| <= rel_tol * E. With the default
    rel_tol of 0 the check is exact equality.
    """
    tol = float(rel_tol)
    if not np.isfinite(tol) or tol < 0.0:
        raise DomainError(f"rel_tol must be finite and >= 0, got {rel_tol!r}")
    e = expected(table)
    return bool(np.all(np.abs(table.entries - e) <= tol * e))
