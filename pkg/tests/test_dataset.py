"""Tests for the columnar dataset core: ingestion, transforms, summaries."""

import math
from fractions import Fraction

import numpy as np
import pytest

from statguide import (
    CATEGORICAL,
    NUMERIC,
    CsvFormatError,
    ColumnTypeError,
    DataError,
    Dataset,
    Predicate,
    column_summary,
    histogram,
    kde,
    load_csv,
    quantile,
)
from statguide.dataset import Column


def make(cols):
    return Dataset(tuple(Column(n, d, v) for n, d, v in cols))


class TestLoadCsv:
    def test_typing_by_parsability(self):
        ds = load_csv("a,b\n1,x\n2,y")
        assert ds.column("a").dtype == NUMERIC
        assert ds.column("b").dtype == CATEGORICAL
        assert list(ds.column("a").values) == [1.0, 2.0]
        assert list(ds.column("b").values) == ["x", "y"]
        assert ds.version == 0
        assert ds.provenance == ()

    def test_missing_token_empty(self):
        ds = load_csv("a\n1\n\n3")
        col = ds.column("a")
        assert col.dtype == NUMERIC
        assert col.missing_count == 1
        assert np.isnan(col.values[1])

    def test_question_mark_missing(self):
        ds = load_csv("hp\n130\n?\n150")
        assert ds.column("hp").dtype == NUMERIC
        assert ds.column("hp").missing_count == 1

    def test_na_token(self):
        ds = load_csv("a\nNA\n2")
        assert ds.column("a").dtype == NUMERIC
        assert ds.column("a").missing_count == 1

    def test_ragged_row_names_line(self):
        with pytest.raises(CsvFormatError, match="line 3"):
            load_csv("a,b\n1,2\n3\n")

    def test_duplicate_headers(self):
        with pytest.raises(CsvFormatError, match="dup"):
            load_csv("dup,dup\n1,2\n")

    def test_no_header(self):
        ds = load_csv("1,x\n2,y", header=False)
        assert ds.column_names == ["column_1", "column_2"]

    def test_custom_delimiter(self):
        ds = load_csv("a;b\n1;2\n", delimiter=";")
        assert ds.column_names == ["a", "b"]

    def test_non_finite_text_is_not_numeric(self):
        # "nan"/"inf" strings must not silently become numeric values
        ds = load_csv("a\n1\nnan\n")
        assert ds.column("a").dtype == CATEGORICAL

    def test_housing_row_count(self, housing):
        assert housing.row_count == 20640
        assert housing.column("ocean_proximity").dtype == CATEGORICAL
        assert housing.column("total_bedrooms").missing_count == 207

    def test_auto_mpg_row_count(self, auto_mpg):
        assert auto_mpg.row_count == 398
        assert auto_mpg.column("horsepower").missing_count == 6
        assert auto_mpg.column("origin").dtype == CATEGORICAL


class TestQuantile:
    def test_single_element(self):
        for q in (0.0, 0.3, 1.0):
            assert quantile([7], q) == 7

    def test_interpolation(self):
        assert quantile([1, 2, 3, 4], 0.25) == pytest.approx(1.75)
        assert quantile([1, 2, 3, 4], 0.5) == pytest.approx(2.5)
        assert quantile([1, 2, 3, 4], 0.75) == pytest.approx(3.25)

    def test_extremes(self):
        assert quantile([1, 2, 3, 4], 1.0) == 4
        assert quantile([1, 2, 3, 4], 0.0) == 1

    def test_empty_raises(self):
        with pytest.raises(DataError):
            quantile([], 0.5)

    def test_monotone_in_q(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            v = rng.normal(size=rng.integers(1, 30))
            qs = np.sort(rng.uniform(0, 1, size=5))
            vals = [quantile(v, q) for q in qs]
            assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
            assert quantile(v, 0.0) == v.min()
            assert quantile(v, 1.0) == v.max()


class TestColumnSummary:
    def test_constant_column(self):
        ds = make([("a", NUMERIC, [5, 5, 5, 5])])
        s = column_summary(ds, "a")
        assert s.mean == 5 and s.std == 0
        assert s.q1 == 5 and s.q3 == 5
        assert s.mode_value == 5 and s.mode_frequency == 4

    def test_quartiles(self):
        ds = make([("a", NUMERIC, [1, 2, 3, 4])])
        s = column_summary(ds, "a")
        assert (s.q1, s.median, s.q3) == (1.75, 2.5, 3.25)

    def test_order_invariant(self):
        ds = make([("a", NUMERIC, [3, 1, 4, 1, 5, 9, 2, 6])])
        s = column_summary(ds, "a")
        assert s.min <= s.q1 <= s.median <= s.q3 <= s.max

    def test_housing_mode_is_clipped_value(self, housing):
        s = column_summary(housing, "median_house_value")
        assert s.mode_value == 500001
        assert s.mode_frequency == 965

    def test_missing_skipped(self):
        ds = make([("a", NUMERIC, [1.0, np.nan, 3.0])])
        s = column_summary(ds, "a")
        assert s.count == 2 and s.missing_count == 1
        assert s.mean == 2.0

    def test_categorical_rejected(self):
        ds = make([("b", CATEGORICAL, ["x", "y"])])
        with pytest.raises(ColumnTypeError):
            column_summary(ds, "b")

    def test_unknown_column(self):
        ds = make([("a", NUMERIC, [1.0])])
        with pytest.raises(DataError):
            column_summary(ds, "nope")

    def test_mean_std_match_rational_oracle(self):
        # exact rational arithmetic on small integer inputs
        rng = np.random.default_rng(11)
        for _ in range(300):
            n = int(rng.integers(2, 21))
            vals = rng.integers(-50, 50, size=n)
            ds = make([("a", NUMERIC, vals.astype(float))])
            s = column_summary(ds, "a")
            fr = [Fraction(int(v)) for v in vals]
            mean = sum(fr) / n
            var = sum((x - mean) ** 2 for x in fr) / (n - 1)
            assert abs(s.mean - float(mean)) < 1e-12
            assert abs(s.std - math.sqrt(float(var))) < 1e-12


class TestTransforms:
    def test_drop_rows_basic(self):
        ds = make([("a", NUMERIC, [1, 2, 3])])
        out = ds.drop_rows_where(Predicate("a", "=", 2))
        assert list(out.column("a").values) == [1, 3]
        assert out.version == 1
        assert len(out.provenance) == 1

    def test_drop_rows_input_unchanged(self, housing):
        before = housing.column("median_house_value").values.copy()
        out = housing.drop_rows_where(Predicate("median_house_value", "==", 500001))
        assert out.row_count == 19675
        assert housing.row_count == 20640
        np.testing.assert_array_equal(
            housing.column("median_house_value").values, before
        )

    def test_drop_rows_noop_still_versions(self):
        ds = make([("a", NUMERIC, [1, 2])])
        out = ds.drop_rows_where(Predicate("a", "==", 99))
        assert list(out.column("a").values) == [1, 2]
        assert out.version == ds.version + 1

    def test_drop_rows_idempotent_in_content(self):
        rng = np.random.default_rng(3)
        ds = make([("a", NUMERIC, rng.integers(0, 5, 40).astype(float))])
        once = ds.drop_rows_where(Predicate("a", ">", 2))
        twice = once.drop_rows_where(Predicate("a", ">", 2))
        np.testing.assert_array_equal(once.column("a").values, twice.column("a").values)

    def test_drop_rows_type_mismatch(self):
        ds = make([("a", NUMERIC, [1, 2])])
        with pytest.raises(DataError):
            ds.drop_rows_where(Predicate("a", "==", "two"))

    def test_drop_rows_in_set(self):
        ds = make([("b", CATEGORICAL, ["x", "y", "z", None])])
        out = ds.drop_rows_where(Predicate("b", "in", ["x", "z"]))
        assert list(out.column("b").values) == ["y", None]

    def test_missing_never_matches(self):
        ds = make([("a", NUMERIC, [1.0, np.nan, 3.0])])
        out = ds.drop_rows_where(Predicate("a", "<", 100))
        assert out.row_count == 1  # only the missing row survives

    def test_derive_additive_identity(self):
        ds = make([("a", NUMERIC, [1.5, -2.0, 7.0])])
        out = ds.derive_column("c", "a", "+", 0)
        np.testing.assert_array_equal(out.column("c").values, ds.column("a").values)

    def test_derive_division_by_zero_is_missing(self):
        ds = make([("a", NUMERIC, [4.0]), ("b", NUMERIC, [0.0])])
        out = ds.derive_column("c", "a", "/", "b")
        assert out.column("c").missing_count == 1

    def test_derive_missing_operand_propagates(self):
        ds = make([("a", NUMERIC, [1.0, np.nan]), ("b", NUMERIC, [2.0, 2.0])])
        out = ds.derive_column("c", "a", "*", "b")
        assert out.column("c").missing_count == 1

    def test_derive_name_collision(self):
        ds = make([("a", NUMERIC, [1.0])])
        with pytest.raises(DataError):
            ds.derive_column("a", "a", "+", 1)

    def test_derive_categorical_operand(self):
        ds = make([("a", NUMERIC, [1.0]), ("b", CATEGORICAL, ["x"])])
        with pytest.raises(DataError):
            ds.derive_column("c", "a", "+", "b")

    def test_housing_avg_rooms(self, housing):
        out = housing.derive_column("avg_rooms", "total_rooms", "/", "population")
        col = out.column("avg_rooms")
        assert col.dtype == NUMERIC
        assert col.missing_count == 0
        assert not housing.has_column("avg_rooms")

    def test_log_transform(self):
        ds = make([("a", NUMERIC, [1.0, math.e, math.e**2])])
        out = ds.log_transform("a")
        np.testing.assert_allclose(out.column("a").values, [0, 1, 2], atol=1e-12)

    def test_log_transform_domain(self):
        ds = make([("a", NUMERIC, [-1.0, 0.0, 10.0])])
        out = ds.log_transform("a")
        vals = out.column("a").values
        assert np.isnan(vals[0]) and np.isnan(vals[1])
        assert vals[2] == pytest.approx(math.log(10))

    def test_log_transform_provenance(self):
        ds = make([("a", NUMERIC, [1.0])])
        out = ds.log_transform("a")
        assert len(out.provenance) == len(ds.provenance) + 1

    def test_values_are_write_protected(self):
        ds = make([("a", NUMERIC, [1.0, 2.0])])
        with pytest.raises(ValueError):
            ds.column("a").values[0] = 99.0


class TestSplit:
    def test_ratio_one_degenerate(self):
        ds = make([("a", NUMERIC, np.arange(5.0))])
        train, test = ds.train_test_split(1.0, seed=1)
        assert train.row_count == 5 and test.row_count == 0

    def test_sizes(self):
        ds = make([("a", NUMERIC, np.arange(10.0))])
        train, test = ds.train_test_split(0.8, seed=1)
        assert (train.row_count, test.row_count) == (8, 2)

    def test_deterministic(self):
        ds = make([("a", NUMERIC, np.arange(50.0))])
        t1, _ = ds.train_test_split(0.5, seed=9)
        t2, _ = ds.train_test_split(0.5, seed=9)
        np.testing.assert_array_equal(t1.column("a").values, t2.column("a").values)

    def test_exact_partition(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            ds = make([("a", NUMERIC, np.arange(float(n)))])
            ratio = float(rng.uniform(0.05, 1.0))
            train, test = ds.train_test_split(ratio, seed=int(rng.integers(1000)))
            merged = sorted(
                list(train.column("a").values) + list(test.column("a").values)
            )
            assert merged == list(np.arange(float(n)))

    def test_bad_ratio(self):
        ds = make([("a", NUMERIC, [1.0, 2.0])])
        with pytest.raises(DataError):
            ds.train_test_split(0.0, seed=1)


class TestHistogram:
    def test_two_equal_bins(self):
        h = histogram([0, 1, 2, 3], bins=2)
        assert list(h.counts) == [2, 2]

    def test_constant_single_bin(self):
        h = histogram([4, 4, 4])
        assert len(h.counts) == 1
        assert h.counts[0] == 3

    def test_conservation_random(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            n = int(rng.integers(1, 500))
            v = rng.normal(size=n) * rng.uniform(0.1, 100)
            h = histogram(v)
            assert sum(h.counts) == n
            edges = np.array(h.bin_edges)
            assert (np.diff(edges) > 0).all()

    def test_conservation_housing(self, housing):
        col = housing.column("median_house_value")
        h = histogram(col.values)
        assert sum(h.counts) == housing.row_count - col.missing_count

    def test_empty_raises(self):
        with pytest.raises(DataError):
            histogram([])


class TestKde:
    def test_normal_sample_integrates_to_one(self):
        rng = np.random.default_rng(4)
        curve = kde(rng.normal(size=1000))
        integral = np.trapezoid(curve.ys, curve.xs)
        assert abs(integral - 1.0) < 0.01

    def test_symmetric_input(self):
        curve = kde([-1.0, 1.0] * 20)
        ys = np.array(curve.ys)
        np.testing.assert_allclose(ys, ys[::-1], atol=1e-9)

    def test_peak_matches_dense_oracle(self):
        rng = np.random.default_rng(8)
        v = rng.normal(loc=3.0, scale=0.5, size=400)
        curve = kde(v)
        h = curve.bandwidth
        # dense direct evaluation of the same estimator
        grid = np.linspace(min(v) - 3 * h, max(v) + 3 * h, 20001)
        dens = np.exp(-0.5 * ((grid[:, None] - v[None, :]) / h) ** 2).sum(axis=1)
        dense_peak = grid[np.argmax(dens)]
        coarse_peak = curve.xs[int(np.argmax(curve.ys))]
        spacing = curve.xs[1] - curve.xs[0]
        assert abs(dense_peak - coarse_peak) <= spacing

    def test_needs_two_distinct(self):
        with pytest.raises(DataError):
            kde([2.0, 2.0, 2.0])

    def test_zero_iqr_fallback(self):
        # IQR is 0 but two distinct values exist; bandwidth must stay positive
        curve = kde([0.0] * 10 + [1.0])
        assert curve.bandwidth > 0


class TestDatasetInvariants:
    def test_duplicate_names_rejected(self):
        with pytest.raises(DataError):
            make([("a", NUMERIC, [1.0]), ("a", NUMERIC, [2.0])])

    def test_unequal_lengths_rejected(self):
        with pytest.raises(DataError):
            make([("a", NUMERIC, [1.0]), ("b", NUMERIC, [1.0, 2.0])])

    def test_empty_name_rejected(self):
        with pytest.raises(DataError):
            make([("", NUMERIC, [1.0])])
