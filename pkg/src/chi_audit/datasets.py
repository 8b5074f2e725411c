"""Bundled example tables.

Small integer tables used throughout the documentation and tests: three
worked 2x2 / 3x4 teaching examples and a 5x2 case-control study of prostatic
cancer by ethnic group (376 cases, 620 controls).
"""

from __future__ import annotations

import csv

from .errors import UnknownDatasetError
from .tables import ContingencyTable, make_table

__all__ = ["DATASET_NAMES", "get_dataset", "write_dataset_csv"]

_DATASETS: dict[str, tuple[list[list[int]], tuple[str, ...], tuple[str, ...]]] = {
    # tiny table whose decision flips when every entry is doubled
    "example1": (
        [[1, 1], [1, 11]],
        ("Category A", "Category B"),
        ("Group 1", "Group 2"),
    ),
    # balanced table whose statistic grows 1000-fold under x1000 scaling
    "example2": (
        [[22, 18], [18, 22]],
        ("Category A", "Category B"),
        ("Group 1", "Group 2"),
    ),
    # 3x4 table with a borderline p-value near 0.07
    "example3": (
        [[98, 86, 79, 71], [78, 82, 88, 51], [75, 62, 82, 77]],
        ("Category A", "Category B", "Category C"),
        ("Group 1", "Group 2", "Group 3", "Group 4"),
    ),
    # prostatic cancer case-control counts by ethnic group
    "cancer": (
        [[200, 279], [16, 20], [55, 93], [31, 79], [74, 149]],
        ("British", "French", "German", "Ukrainian", "Others"),
        ("Cases", "Controls"),
    ),
}

DATASET_NAMES = tuple(sorted(_DATASETS))


def get_dataset(name: str) -> ContingencyTable:
    """The named bundled table, with labels."""
    try:
        matrix, row_labels, col_labels = _DATASETS[name]
    except KeyError:
        raise UnknownDatasetError(name, DATASET_NAMES) from None
    return make_table(matrix, row_labels=row_labels, col_labels=col_labels)


def write_dataset_csv(name: str, path) -> None:
    """Write the named table as CSV with a header row and a label column."""
    try:
        matrix, row_labels, col_labels = _DATASETS[name]
    except KeyError:
        raise UnknownDatasetError(name, DATASET_NAMES) from None
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["", *col_labels])
        for label, row in zip(row_labels, matrix):
            writer.writerow([label, *row])
