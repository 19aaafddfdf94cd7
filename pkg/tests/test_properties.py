"""Hypothesis property tests for the dataset core."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from statguide import NUMERIC, Dataset, Predicate, histogram, quantile
from statguide.dataset import Column

finite_floats = st.floats(
    min_value=-1e9, max_value=1e9, allow_nan=False, allow_infinity=False
)


@given(st.lists(finite_floats, min_size=1, max_size=60), st.floats(0, 1))
def test_quantile_bounded_by_extremes(values, q):
    v = quantile(values, q)
    assert min(values) <= v <= max(values)


@given(
    st.lists(finite_floats, min_size=1, max_size=60),
    st.floats(0, 1),
    st.floats(0, 1),
)
def test_quantile_monotone(values, q1, q2):
    lo, hi = sorted([q1, q2])
    assert quantile(values, lo) <= quantile(values, hi) + 1e-9


@given(st.lists(finite_floats, min_size=1, max_size=300))
def test_histogram_conserves_count(values):
    h = histogram(values)
    assert sum(h.counts) == len(values)
    edges = list(h.bin_edges)
    assert edges == sorted(edges)
    assert len(set(edges)) == len(edges)


@given(
    st.lists(finite_floats, min_size=1, max_size=50),
    finite_floats,
    st.sampled_from(["<", ">", "<=", ">=", "==", "!="]),
)
@settings(max_examples=200)
def test_drop_rows_idempotent_and_partitioning(values, threshold, op):
    ds = Dataset((Column("a", NUMERIC, np.array(values)),))
    pred = Predicate("a", op, threshold)
    once = ds.drop_rows_where(pred)
    twice = once.drop_rows_where(pred)
    assert list(once.column("a").values) == list(twice.column("a").values)
    # complementary predicate keeps exactly the dropped rows
    complement = {"<": ">=", ">": "<=", "<=": ">", ">=": "<", "==": "!=", "!=": "=="}[op]
    other = ds.drop_rows_where(Predicate("a", complement, threshold))
    assert once.row_count + other.row_count == ds.row_count
    # the original dataset is untouched
    assert list(ds.column("a").values) == values
