"""Scale-dependence audit and scale-invariant alternatives.

The Pearson statistic is homogeneous of degree 1 in the table entries:
multiplying every entry by c multiplies the statistic by c, so with the
critical value fixed there is always a scale c* = critical / statistic at
which the decision flips. ``audit_scaling`` measures and reports that
structure for a concrete table.

The invariant statistics are homogeneous of degree 0 (unchanged under
rescaling): SQUARED_DENOM squares the denominators, SUM_NORMALIZED divides
all entries by their sum before applying the Pearson formula, MAX_NORMALIZED
divides by the maximum entry. They have no classical reference distribution,
so critical values come from Monte Carlo calibration under the homogeneity
null: rows drawn as independent multinomials with the observed row totals
and pooled column proportions.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend
from .distributions import ChiSquare
from .errors import (
    DegenerateProbabilitiesError,
    DomainError,
    TooFewTrialsWarning,
)
from .pearson import homogeneity_test, pearson_statistic
from .tables import ContingencyTable, make_table, scale

__all__ = [
    "InvariantStatKind",
    "ProbeOutcome",
    "ScalingAudit",
    "NullCalibration",
    "InvariantTestResult",
    "audit_scaling",
    "invariant_statistic",
    "sample_null_table",
    "calibrate_null",
    "invariant_test",
    "QUANTILE_LEVELS",
]

# extra quantile levels reported by every calibration, besides 1 - alpha
QUANTILE_LEVELS = (0.5, 0.75, 0.9, 0.95, 0.99)

_FIXED_TOTAL_NOTE = (
    "the raw statistic is only on the chi-square scale when the grand total "
    "is the actual number of observations; rescaled tables need the "
    "invariant statistics instead"
)


class InvariantStatKind(enum.Enum):
    """Scale-invariant statistics; values double as CLI spellings."""

    SQUARED_DENOM = "squared-denom"
    SUM_NORMALIZED = "sum-normalized"
    MAX_NORMALIZED = "max-normalized"


_KIND_CODES = {
    InvariantStatKind.SQUARED_DENOM: backend.kernel.KIND_SQUARED_DENOM,
    InvariantStatKind.SUM_NORMALIZED: backend.kernel.KIND_SUM_NORMALIZED,
    InvariantStatKind.MAX_NORMALIZED: backend.kernel.KIND_MAX_NORMALIZED,
}


@dataclass(frozen=True)
class ProbeOutcome:
    """Full test re-run on the table scaled by ``scale``."""

    scale: float
    statistic: float
    p_value: float
    reject_h0: bool


@dataclass(frozen=True)
class ScalingAudit:
    """How the test's decision depends on the entry scale."""

    base_statistic: float
    critical_value: float
    critical_scale: float  # inf when the base statistic is 0
    linearity_residual: float
    probes: tuple[ProbeOutcome, ...]
    proportional: bool
    flip_confirmed: bool | None  # None when there is no finite flip point
    alpha: float
    notes: tuple[str, ...]

    @property
    def decision_at(self) -> tuple[tuple[float, bool], ...]:
        return tuple((p.scale, p.reject_h0) for p in self.probes)


@dataclass(frozen=True)
class NullCalibration:
    """Empirical null distribution summary for an invariant statistic."""

    kind: InvariantStatKind
    row_totals: tuple[int, ...]
    pooled_probs: tuple[float, ...]
    alpha: float
    trials: int
    seed: int
    empirical_quantiles: dict[float, float]
    critical_value_at_alpha: float
    monte_carlo_se: float
    too_few_trials: bool


@dataclass(frozen=True)
class InvariantTestResult:
    """Decision record for an invariant statistic against its calibration."""

    statistic: float
    kind: InvariantStatKind
    alpha: float
    critical_value: float
    reject_h0: bool
    calibration: NullCalibration


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if math.isnan(a) or not 0.0 < a < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha!r}")
    return a


def audit_scaling(
    table: ContingencyTable,
    alpha: float = 0.05,
    probe_scales=(),
) -> ScalingAudit:
    """Measure how scaling the entries by c moves the test across its threshold.

    The statistic is linear in c, so with base statistic s > 0 and critical
    value k the decision on the scaled table is reject iff c > c* = k / s.
    The audit reports c* exactly as k / s, re-runs the full test at each
    probe scale, records the worst relative departure from linearity, and
    confirms the flip empirically just below and above c*.
    """
    a = _check_alpha(alpha)
    probes = tuple(float(c) for c in probe_scales)
    for c in probes:
        if not math.isfinite(c) or c <= 0.0:
            raise DomainError(f"probe scales must be finite and > 0, got {c!r}")

    base = homogeneity_test(table, a)
    s = base.statistic
    crit = base.critical_value
    proportional = s <= 1e-12 * table.grand_total
    critical_scale = math.inf if s == 0.0 else crit / s

    outcomes = []
    residual = 0.0
    for c in probes:
        res = homogeneity_test(scale(table, c), a)
        outcomes.append(
            ProbeOutcome(scale=c, statistic=res.statistic,
                         p_value=res.p_value, reject_h0=res.reject_h0)
        )
        if s > 0.0:
            predicted = c * s
            r = abs(res.statistic - predicted) / predicted
            if r > residual:
                residual = r
    if s == 0.0:
        residual = 0.0

    flip_confirmed: bool | None = None
    if s > 0.0 and math.isfinite(critical_scale):
        below = homogeneity_test(scale(table, critical_scale * (1.0 - 1e-3)), a)
        above = homogeneity_test(scale(table, critical_scale * (1.0 + 1e-3)), a)
        flip_confirmed = (not below.reject_h0) and above.reject_h0

    return ScalingAudit(
        base_statistic=s,
        critical_value=crit,
        critical_scale=critical_scale,
        linearity_residual=residual,
        probes=tuple(outcomes),
        proportional=proportional,
        flip_confirmed=flip_confirmed,
        alpha=a,
        notes=(_FIXED_TOTAL_NOTE,),
    )


def invariant_statistic(table: ContingencyTable, kind: InvariantStatKind) -> float:
    """A statistic unchanged by rescaling all entries.

    SUM_NORMALIZED and MAX_NORMALIZED are computed by actually normalizing
    the table first and running the Pearson formula on the result; this is
    what makes their values on a table and on any rescaling of it agree to
    the last bit, not merely to rounding error.
    """
    if not isinstance(kind, InvariantStatKind):
        raise DomainError(f"kind must be an InvariantStatKind, got {kind!r}")
    if kind is InvariantStatKind.SQUARED_DENOM:
        from .tables import expected

        e = expected(table)
        d = table.entries - e
        return float(np.sum(d * d / (e * e)))
    if kind is InvariantStatKind.SUM_NORMALIZED:
        divisor = table.grand_total
    else:
        divisor = float(table.entries.max())
    normalized = make_table(
        table.entries / divisor,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
    )
    return pearson_statistic(normalized)


def _validate_sampling_inputs(row_totals, pooled_probs):
    totals = []
    for r in row_totals:
        ri = int(r)
        if ri != r or ri < 1:
            raise DomainError(f"row totals must be positive integers, got {r!r}")
        totals.append(ri)
    if len(totals) < 1:
        raise DomainError("at least one row total is required")
    probs = [float(p) for p in pooled_probs]
    if len(probs) < 2:
        raise DomainError("at least two pooled probabilities are required")
    for p in probs:
        if not math.isfinite(p) or p < 0.0:
            raise DomainError(f"pooled probabilities must be finite and >= 0, got {p!r}")
    total = math.fsum(probs)
    if abs(total - 1.0) > 1e-12:
        raise DomainError(f"pooled probabilities must sum to 1, got {total!r}")
    return totals, probs


def sample_null_table(row_totals, pooled_probs, rng) -> ContingencyTable:
    """One table drawn under the homogeneity null.

    Each row i is an independent multinomial with row_totals[i] trials and
    the pooled probabilities; tables with an all-zero column are redrawn (at
    most 100 times, then DegenerateProbabilitiesError). ``rng`` is either a
    kernel Xorshift64Star state or an integer seed.
    """
    from ._kernel import Xorshift64Star, sample_table_counts

    totals, probs = _validate_sampling_inputs(row_totals, pooled_probs)
    if any(p == 0.0 for p in probs):
        raise DegenerateProbabilitiesError(
            "a pooled probability of 0 forces an all-zero column"
        )
    if isinstance(rng, int):
        rng = Xorshift64Star(rng)
    counts = sample_table_counts(totals, probs, rng)
    return make_table(counts)


def calibrate_null(
    kind: InvariantStatKind,
    row_totals,
    pooled_probs,
    alpha: float = 0.05,
    trials: int = 10000,
    seed: int = 0,
) -> NullCalibration:
    """Estimate the null distribution of an invariant statistic by simulation.

    Draws ``trials`` independent null tables (one PRNG stream per trial, so
    the result does not depend on evaluation order), sorts the statistics,
    and takes the order statistic at rank ceil((1 - alpha) * trials) as the
    critical value. The standard error comes from the binomial bracket
    around that rank: with d = ceil(sqrt(trials * alpha * (1 - alpha))), the
    half-width of [rank - d, rank + d] in statistic units.
    """
    if not isinstance(kind, InvariantStatKind):
        raise DomainError(f"kind must be an InvariantStatKind, got {kind!r}")
    a = _check_alpha(alpha)
    if not isinstance(trials, int) or isinstance(trials, bool):
        raise DomainError(f"trials must be an int, got {trials!r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    seed = int(seed)
    totals, probs = _validate_sampling_inputs(row_totals, pooled_probs)
    if any(p == 0.0 for p in probs):
        raise DegenerateProbabilitiesError(
            "a pooled probability of 0 forces an all-zero column"
        )

    too_few = trials < 1000
    if too_few:
        warnings.warn(
            f"{trials} trials is below the recommended minimum of 1000; "
            "the calibrated critical value will be noisy",
            TooFewTrialsWarning,
            stacklevel=2,
        )

    stats = backend.kernel.null_statistics(
        _KIND_CODES[kind], totals, probs, trials, seed
    )
    stats = np.sort(stats)

    def rank_value(level: float) -> float:
        r = math.ceil(level * trials)
        r = min(max(r, 1), trials)
        return float(stats[r - 1])

    levels = sorted(set(QUANTILE_LEVELS) | {1.0 - a})
    quantiles = {level: rank_value(level) for level in levels}
    critical = quantiles[1.0 - a]

    r = min(max(math.ceil((1.0 - a) * trials), 1), trials)
    d = max(1, math.ceil(math.sqrt(trials * a * (1.0 - a))))
    lo = float(stats[max(r - d, 1) - 1])
    hi = float(stats[min(r + d, trials) - 1])
    se = (hi - lo) / 2.0

    return NullCalibration(
        kind=kind,
        row_totals=tuple(totals),
        pooled_probs=tuple(probs),
        alpha=a,
        trials=trials,
        seed=seed,
        empirical_quantiles=quantiles,
        critical_value_at_alpha=critical,
        monte_carlo_se=se,
        too_few_trials=too_few,
    )


def invariant_test(
    table: ContingencyTable,
    kind: InvariantStatKind,
    alpha: float = 0.05,
    trials: int = 10000,
    seed: int = 0,
) -> InvariantTestResult:
    """Invariant statistic of the table against its calibrated null.

    The null is calibrated on the table's own margins: row totals (rounded
    to integers when the entries are not counts, never below 1) and pooled
    column proportions C_j / T. The calibration record in the result states
    the margins actually used.
    """
    row_totals = [max(1, round(float(r))) for r in table.row_sums]
    t = table.grand_total
    pooled = [float(c) / t for c in table.col_sums]
    calibration = calibrate_null(kind, row_totals, pooled, alpha, trials, seed)
    stat = invariant_statistic(table, kind)
    return InvariantTestResult(
        statistic=stat,
        kind=kind,
        alpha=calibration.alpha,
        critical_value=calibration.critical_value_at_alpha,
        reject_h0=stat > calibration.critical_value_at_alpha,
        calibration=calibration,
    )
