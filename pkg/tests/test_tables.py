"""Contingency table construction, margins, expected counts, scaling."""

import numpy as np
import pytest
from hypothesis import given, settings

from chi_audit import (
    ContingencyTable,
    DomainError,
    NegativeEntryError,
    NonFiniteEntryError,
    NonPositiveScaleError,
    TableError,
    TooFewColumnsError,
    TooFewRowsError,
    ZeroColumnSumError,
    ZeroRowSumError,
    expected,
    make_table,
    rows_proportional,
    scale,
)

from _oracles import exact_expected
from _strategies import valid_tables


class TestConstruction:
    def test_entries_stored_as_float64(self):
        t = make_table([[1, 2], [3, 4]])
        assert t.entries.dtype == np.float64
        assert t.shape == (2, 2)

    def test_entries_are_copied_and_frozen(self):
        src = np.array([[1.0, 2.0], [3.0, 4.0]])
        t = make_table(src)
        src[0, 0] = 99.0
        assert t.entries[0, 0] == 1.0
        with pytest.raises(ValueError):
            t.entries[0, 0] = 5.0

    def test_negative_entry_names_the_cell(self):
        with pytest.raises(NegativeEntryError) as exc:
            make_table([[1, 2], [3, -4]])
        assert (exc.value.row, exc.value.col) == (1, 1)

    def test_non_finite_entry_names_the_cell(self):
        with pytest.raises(NonFiniteEntryError) as exc:
            make_table([[1, float("nan")], [3, 4]])
        assert (exc.value.row, exc.value.col) == (0, 1)
        with pytest.raises(NonFiniteEntryError):
            make_table([[1, 2], [float("inf"), 4]])

    def test_too_few_rows_and_cols(self):
        with pytest.raises(TooFewRowsError):
            make_table([[1, 2]])
        with pytest.raises(TooFewColumnsError):
            make_table([[1], [2]])

    def test_zero_row_sum_names_row_and_suggests_removal(self):
        with pytest.raises(ZeroRowSumError) as exc:
            make_table([[1, 2], [0, 0]])
        assert exc.value.row == 1
        assert "remove" in str(exc.value)

    def test_zero_column_sum_names_column(self):
        with pytest.raises(ZeroColumnSumError) as exc:
            make_table([[0, 2], [0, 4]])
        assert exc.value.col == 0

    def test_ragged_input_rejected(self):
        with pytest.raises(TableError):
            make_table([[1, 2], [3]])

    def test_one_dimensional_input_rejected(self):
        with pytest.raises(TableError):
            make_table([1, 2, 3])

    def test_label_length_mismatch(self):
        with pytest.raises(TableError):
            make_table([[1, 2], [3, 4]], row_labels=("a",))
        with pytest.raises(TableError):
            make_table([[1, 2], [3, 4]], col_labels=("x", "y", "z"))

    def test_labels_kept_as_tuples(self):
        t = make_table([[1, 2], [3, 4]], row_labels=["r1", "r2"],
                       col_labels=["c1", "c2"])
        assert t.row_labels == ("r1", "r2")
        assert t.col_labels == ("c1", "c2")

    def test_repr_mentions_shape(self):
        assert "2x2" in repr(make_table([[1, 2], [3, 4]]))


class TestMargins:
    def test_margins_golden_cancer(self):
        t = make_table([[200, 279], [16, 20], [55, 93], [31, 79], [74, 149]])
        assert t.row_sums.tolist() == [479, 36, 148, 110, 223]
        assert t.col_sums.tolist() == [376, 620]
        assert t.grand_total == 996.0

    def test_margins_golden_3x4(self):
        t = make_table([[98, 86, 79, 71], [78, 82, 88, 51], [75, 62, 82, 77]])
        assert t.col_sums.tolist() == [251, 230, 249, 199]
        assert t.row_sums.tolist() == [334, 299, 296]
        assert t.grand_total == 929.0

    @given(valid_tables())
    @settings(max_examples=50, deadline=None)
    def test_margin_consistency(self, arr):
        t = make_table(arr)
        assert t.row_sums.sum() == pytest.approx(t.grand_total, rel=1e-12)
        assert t.col_sums.sum() == pytest.approx(t.grand_total, rel=1e-12)
        assert (t.row_sums > 0).all() and (t.col_sums > 0).all()


class TestExpected:
    def test_expected_matches_exact_rational_oracle(self):
        matrix = [[1, 1], [1, 11]]
        e = expected(make_table(matrix))
        for i, row in enumerate(exact_expected(matrix)):
            for j, exact in enumerate(row):
                assert e[i, j] == pytest.approx(float(exact), rel=1e-12)

    def test_expected_preserves_margins(self):
        t = make_table([[98, 86, 79, 71], [78, 82, 88, 51], [75, 62, 82, 77]])
        e = expected(t)
        np.testing.assert_allclose(e.sum(axis=1), t.row_sums, rtol=1e-12)
        np.testing.assert_allclose(e.sum(axis=0), t.col_sums, rtol=1e-12)

    @given(valid_tables())
    @settings(max_examples=50, deadline=None)
    def test_expected_positive_on_valid_tables(self, arr):
        e = expected(make_table(arr))
        assert (e > 0).all()


class TestScale:
    def test_scale_multiplies_entries(self):
        t = scale(make_table([[1, 1], [1, 11]]), 2.0)
        assert t.entries.tolist() == [[2, 2], [2, 22]]

    def test_scale_preserves_labels(self):
        t = make_table([[1, 2], [3, 4]], row_labels=("a", "b"))
        assert scale(t, 3.0).row_labels == ("a", "b")

    @pytest.mark.parametrize("factor", [0.0, -1.0, float("inf"),
                                        float("nan"), -0.5])
    def test_invalid_scale_factors(self, factor):
        t = make_table([[1, 2], [3, 4]])
        with pytest.raises(NonPositiveScaleError):
            scale(t, factor)

    def test_fractional_scale_allowed(self):
        t = scale(make_table([[2, 4], [6, 8]]), 0.5)
        assert t.entries.tolist() == [[1, 2], [3, 4]]


class TestRowsProportional:
    def test_exact_rank_one_table(self):
        assert rows_proportional(make_table([[1, 2], [2, 4]]))

    def test_non_proportional_table(self):
        assert not rows_proportional(make_table([[1, 1], [1, 11]]))

    def test_tolerance_widens_acceptance(self):
        # one part in 1e7 off from proportional
        t = make_table([[1.0, 2.0], [2.0, 4.0 + 4e-7]])
        assert not rows_proportional(t)
        assert rows_proportional(t, rel_tol=1e-6)

    @pytest.mark.parametrize("tol", [-1e-9, float("nan"), float("inf")])
    def test_invalid_tolerance(self, tol):
        with pytest.raises(DomainError):
            rows_proportional(make_table([[1, 2], [2, 4]]), rel_tol=tol)

    def test_scaling_preserves_proportionality(self):
        t = make_table([[3, 6, 9], [1, 2, 3]])
        assert rows_proportional(t)
        assert rows_proportional(scale(t, 7.0), rel_tol=1e-12)


def test_direct_constructor_equals_make_table():
    a = ContingencyTable([[1, 2], [3, 4]])
    b = make_table([[1, 2], [3, 4]])
    assert np.array_equal(a.entries, b.entries)
