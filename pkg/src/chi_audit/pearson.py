"""Pearson chi-square tests on contingency tables.

The statistic is the plain Pearson sum over cells of (O - E)^2 / E with
E = R_i * C_j / T, compared against the chi-square quantile at (m-1)(n-1)
degrees of freedom. No continuity correction is applied anywhere. The null
hypothesis is rejected iff the statistic is STRICTLY greater than the
critical value, so a statistic exactly at the boundary does not reject.

Low expected counts are reported as advisories via check_assumptions; they
never block a test from running.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ChiSquare
from .errors import (
    DomainError,
    NegativeEntryError,
    NonFiniteEntryError,
    NotNormalizedError,
    TableError,
    TooFewColumnsError,
    TooFewRowsError,
    ZeroMarginalError,
)
from .tables import ContingencyTable, expected

__all__ = [
    "PearsonResult",
    "AssumptionReport",
    "pearson_statistic",
    "homogeneity_test",
    "independence_from_joint_frequencies",
    "check_assumptions",
]


@dataclass(frozen=True)
class PearsonResult:
    """Outcome of a chi-square test."""

    statistic: float
    dof: int
    alpha: float
    critical_value: float
    p_value: float
    reject_h0: bool
    expected: np.ndarray
    contributions: np.ndarray


@dataclass(frozen=True)
class AssumptionReport:
    """Advisory report on expected-count magnitudes. Never blocks a test."""

    min_expected: float
    cells_below_5: int
    cells_below_10: int
    cells_below_threshold: int
    threshold: float
    passes: bool
    notes: tuple[str, ...]


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if math.isnan(a) or not 0.0 < a < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha!r}")
    return a


def pearson_statistic(table: ContingencyTable) -> float:
    """The Pearson sum over cells of (O - E)^2 / E."""
    e = expected(table)
    d = table.entries - e
    return float(np.sum(d * d / e))


def homogeneity_test(table: ContingencyTable, alpha: float = 0.05) -> PearsonResult:
    """Chi-square test of row homogeneity (equivalently, independence)."""
    a = _check_alpha(alpha)
    e = expected(table)
    d = table.entries - e
    contributions = d * d / e
    stat = float(contributions.sum())
    m, n = table.shape
    dof = (m - 1) * (n - 1)
    dist = ChiSquare(dof)
    critical = dist.quantile(1.0 - a)
    p_value = 1.0 - dist.cdf(stat)
    contributions.flags.writeable = False
    e.flags.writeable = False
    return PearsonResult(
        statistic=stat,
        dof=dof,
        alpha=a,
        critical_value=critical,
        p_value=p_value,
        reject_h0=stat > critical,
        expected=e,
        contributions=contributions,
    )


def independence_from_joint_frequencies(
    z, alpha: float = 0.05, trials: int = 1
) -> PearsonResult:
    """Chi-square independence test from a normalized joint frequency matrix.

    ``z`` holds joint relative frequencies summing to 1; marginals p_i and
    q_j are its row and column sums, and independence predicts z_ij =
    p_i * q_j. ``trials`` is the number of observations behind ``z``: the
    test statistic scales linearly in it, which is exactly the scale
    dependence this package audits.
    """
    a = _check_alpha(alpha)
    zarr = np.array(z, dtype=float, copy=True)
    if zarr.ndim != 2:
        raise TableError(
            f"joint frequencies must form a 2-D array, got ndim={zarr.ndim}"
        )
    m, n = zarr.shape
    if m < 2:
        raise TooFewRowsError(m)
    if n < 2:
        raise TooFewColumnsError(n)
    bad = np.argwhere(~np.isfinite(zarr))
    if bad.size:
        i, j = bad[0]
        raise NonFiniteEntryError(int(i), int(j))
    bad = np.argwhere(zarr < 0.0)
    if bad.size:
        i, j = bad[0]
        raise NegativeEntryError(int(i), int(j))
    total = float(zarr.sum())
    if abs(total - 1.0) > 1e-9:
        raise NotNormalizedError(total)
    if not isinstance(trials, int) or isinstance(trials, bool):
        raise DomainError(f"trials must be an int, got {trials!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")

    p = zarr.sum(axis=1)
    q = zarr.sum(axis=0)
    for i in range(m):
        if p[i] <= 0.0:
            raise ZeroMarginalError("row", i)
    for j in range(n):
        if q[j] <= 0.0:
            raise ZeroMarginalError("column", j)

    observed = trials * zarr
    expected_counts = trials * np.outer(p, q)
    d = observed - expected_counts
    contributions = d * d / expected_counts
    stat = float(contributions.sum())
    dof = (m - 1) * (n - 1)
    dist = ChiSquare(dof)
    critical = dist.quantile(1.0 - a)
    p_value = 1.0 - dist.cdf(stat)
    contributions.flags.writeable = False
    expected_counts.flags.writeable = False
    return PearsonResult(
        statistic=stat,
        dof=dof,
        alpha=a,
        critical_value=critical,
        p_value=p_value,
        reject_h0=stat > critical,
        expected=expected_counts,
        contributions=contributions,
    )


def check_assumptions(
    table: ContingencyTable, threshold: float = 5.0
) -> AssumptionReport:
    """Advisory check of the usual expected-count rules of thumb.

    The classical guidance wants every expected count at least 5 (some
    sources ask for 10). Violations are reported, never enforced.
    """
    thr = float(threshold)
    if not math.isfinite(thr) or thr <= 0.0:
        raise DomainError(f"threshold must be finite and > 0, got {threshold!r}")
    e = expected(table)
    min_expected = float(e.min())
    below_5 = int((e < 5.0).sum())
    below_10 = int((e < 10.0).sum())
    below_thr = int((e < thr).sum())
    passes = below_thr == 0
    notes: list[str] = []
    if below_thr:
        notes.append(
            f"{below_thr} cell(s) have expected count below {thr:g}; "
            "the chi-square approximation may be inaccurate"
        )
    if below_5:
        notes.append(
            f"{below_5} cell(s) fall below the common minimum of 5"
        )
    if below_10:
        notes.append(
            f"{below_10} cell(s) fall below the stricter minimum of 10 "
            "that some sources recommend"
        )
    if not notes:
        notes.append("all expected counts meet the threshold")
    return AssumptionReport(
        min_expected=min_expected,
        cells_below_5=below_5,
        cells_below_10=below_10,
        cells_below_threshold=below_thr,
        threshold=thr,
        passes=passes,
        notes=tuple(notes),
    )
