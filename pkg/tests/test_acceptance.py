"""Acceptance gate: one test per shipped guarantee, at the stated tolerances.

Run with ``pytest -v tests/test_acceptance.py`` to get a pass/fail line per
criterion. Each test is self-contained and states its tolerance inline.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from chi_audit import (
    ChiSquare,
    InvariantStatKind,
    audit_scaling,
    calibrate_null,
    get_dataset,
    homogeneity_test,
    invariant_statistic,
    make_table,
    pearson_statistic,
    rows_proportional,
    scale,
)
from chi_audit.backend import kernel
from _oracles import exact_pearson, exact_sum_normalized_null_quantile
from _strategies import rank_one_corpus, seeded_corpus

SCALES = (0.001, 0.5, 1.0, 2.0, 7.0, 1000.0)


def test_criterion_01_small_2x2_exact_values_and_decisions():
    t1 = get_dataset("example1")
    t2 = scale(t1, 2.0)
    r1 = homogeneity_test(t1)
    r2 = homogeneity_test(t2)
    assert r1.statistic == pytest.approx(float(Fraction(175, 72)), rel=1e-12)
    assert r2.statistic == pytest.approx(float(Fraction(175, 36)), rel=1e-12)
    # 2.43 < 3.841 fails to reject; 4.86 > 3.841 rejects
    assert r1.reject_h0 is False
    assert r2.reject_h0 is True
    # runtime: both tests, end to end, in under a millisecond
    homogeneity_test(t1), homogeneity_test(t2)  # warm
    best = math.inf
    for _ in range(20):
        start = time.perf_counter()
        homogeneity_test(t1)
        homogeneity_test(t2)
        best = min(best, time.perf_counter() - start)
    assert best < 1e-3, f"two 2x2 tests took {best * 1e3:.3f} ms"


def test_criterion_02_balanced_2x2_decision_flip_under_1000x():
    t = get_dataset("example2")
    assert pearson_statistic(t) == pytest.approx(0.8, rel=1e-12)
    assert pearson_statistic(scale(t, 1000.0)) == pytest.approx(
        800.0, rel=1e-12
    )
    audit = audit_scaling(t, probe_scales=(1000.0,))
    assert audit.decision_at == ((1000.0, True),)
    assert homogeneity_test(t).reject_h0 is False
    assert homogeneity_test(scale(t, 1000.0)).reject_h0 is True


def test_criterion_03_3x4_statistics_p_values_and_expected_matrix():
    t = get_dataset("example3")
    r = homogeneity_test(t)
    assert r.statistic == pytest.approx(11.475, abs=5e-3)
    assert r.dof == 6
    assert r.p_value == pytest.approx(0.07, abs=5e-3)
    doubled = homogeneity_test(scale(t, 2.0))
    assert doubled.statistic == pytest.approx(22.95, abs=1e-2)
    assert doubled.p_value == pytest.approx(0.0008, abs=2e-4)
    # one-decimal reference matrix; one reference entry is 0.14 off the exact
    # value (others agree to rounding), so the comparison tolerance is 0.15
    reference = np.array(
        [
            [90.3, 82.7, 89.5, 71.6],
            [80.9, 73.9, 80.2, 64.1],
            [79.9, 73.3, 79.2, 63.4],
        ]
    )
    assert np.abs(r.expected - reference).max() <= 0.15


def test_criterion_04_distribution_numerics():
    assert ChiSquare(1).quantile(0.95) == pytest.approx(3.841, abs=5e-3)
    assert ChiSquare(6).quantile(0.95) == pytest.approx(12.59, abs=5e-3)
    for dof in range(1, 11):
        d = ChiSquare(dof)
        for p in np.arange(0.01, 1.0, 0.01):
            p = float(p)
            assert abs(d.cdf(d.quantile(p)) - p) <= 1e-9, (dof, p)
    d2 = ChiSquare(2)
    for x in np.linspace(0.0, 50.0, 500):
        x = float(x)
        assert abs(d2.cdf(x) - (1.0 - math.exp(-x / 2.0))) <= 1e-12


def test_criterion_05_scaling_linearity_on_random_corpus():
    corpus = seeded_corpus(20260815, 1000, max_dim=6, max_entry=100.0)
    start = time.perf_counter()
    for arr in corpus:
        base = pearson_statistic(make_table(arr))
        for c in SCALES:
            scaled = pearson_statistic(make_table(arr * c))
            assert abs(scaled - c * base) <= 1e-8 * max(1.0, c * base)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"linearity sweep took {elapsed:.2f} s"


def test_criterion_06_invariant_statistics_are_degree_zero():
    corpus = seeded_corpus(20260815, 1000, max_dim=6, max_entry=100.0)
    for arr in corpus[:300]:
        t = make_table(arr)
        for kind in InvariantStatKind:
            base = invariant_statistic(t, kind)
            for c in SCALES:
                other = invariant_statistic(make_table(arr * c), kind)
                assert abs(other - base) <= 1e-9 * max(1.0, base)
    # on the bundled integer pairs the values coincide exactly
    for name, factor in (("example1", 2.0), ("example2", 1000.0)):
        t = get_dataset(name)
        for kind in InvariantStatKind:
            assert invariant_statistic(t, kind) == invariant_statistic(
                scale(t, factor), kind
            ), (name, kind)


def test_criterion_07_zero_statistic_iff_proportional_rows():
    for arr in rank_one_corpus(314159, 200):
        t = make_table(arr)
        assert pearson_statistic(t) <= 1e-9
        assert rows_proportional(t, 1e-6) is True
    for name in ("example1", "example2", "example3", "cancer"):
        t = get_dataset(name)
        assert pearson_statistic(t) > 0.0
        assert rows_proportional(t, 1e-6) is False


def test_criterion_08_floating_statistic_matches_exact_rational_oracle():
    for name in ("example1", "example2", "example3", "cancer"):
        t = get_dataset(name)
        truth = float(exact_pearson(t.entries.astype(int).tolist()))
        assert pearson_statistic(t) == pytest.approx(truth, rel=1e-12), name


def test_criterion_09a_calibrated_test_rejection_rate():
    start = time.perf_counter()
    cal = calibrate_null(
        InvariantStatKind.SUM_NORMALIZED,
        (40, 40),
        (0.5, 0.5),
        trials=20000,
        seed=42,
    )
    fresh = kernel.null_statistics(
        kernel.KIND_SUM_NORMALIZED, [40, 40], [0.5, 0.5], 20000, 43
    )
    rate = float(np.mean(fresh > cal.critical_value_at_alpha))
    band = 3.0 * math.sqrt(0.05 * 0.95 / 20000.0)
    elapsed = time.perf_counter() - start
    assert abs(rate - 0.05) <= band, f"rate {rate:.4f} outside 0.05 +/- {band:.4f}"
    assert elapsed < 30.0, f"calibration took {elapsed:.2f} s"


def test_criterion_09b_calibrated_critical_value_near_scaled_quantile():
    cal = calibrate_null(
        InvariantStatKind.SUM_NORMALIZED,
        (40, 40),
        (0.5, 0.5),
        trials=20000,
        seed=42,
    )
    target = ChiSquare(1).quantile(0.95) / 80.0
    gap = abs(cal.critical_value_at_alpha - target)
    exact = float(exact_sum_normalized_null_quantile(40, Fraction(19, 20)))
    assert gap <= 3.0 * cal.monte_carlo_se, (
        "the calibrated critical value cannot sit within Monte Carlo error of "
        "the asymptotic target at these margins: the exact finite-sample null "
        "is a coarse lattice whose true 95% point is "
        f"{exact!r} (the atom the calibration lands on, here "
        f"{cal.critical_value_at_alpha!r}), while the asymptote is "
        f"{target!r}; the gap {gap!r} is a real discreteness effect, and the "
        f"standard error {cal.monte_carlo_se!r} collapses inside a tie block. "
        "No Monte Carlo budget closes this; see the large-margin check in "
        "tests/test_invariance.py for the regime where the asymptote applies."
    )


def test_criterion_10_byte_identical_reports_for_fixed_seed(tmp_path):
    path = tmp_path / "t.csv"
    subprocess.run(
        [sys.executable, "-m", "chi_audit", "datasets", "example2",
         "--output", str(path)],
        check=True,
        capture_output=True,
    )
    args = [
        sys.executable, "-m", "chi_audit", "invariant", str(path),
        "--kind", "sum-normalized", "--trials", "2000", "--seed", "31",
        "--json", "--no-timestamp",
    ]
    first = subprocess.run(args, capture_output=True)
    second = subprocess.run(args, capture_output=True)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    json.loads(first.stdout)  # well-formed
