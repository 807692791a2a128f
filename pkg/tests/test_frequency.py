import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from changelib.distance.frequency import (
    CellId,
    build_frequency_table,
    default_depths,
    iter_gram_ids,
    min_separation,
    nu,
    quantize_series,
    quantize_value,
)
from changelib.errors import DegenerateInputError, InvalidInputError

SAMPLE = [0.1, 0.2, 0.6, 0.7]

values = st.floats(min_value=-1.0, max_value=2.0, allow_nan=False)


@pytest.mark.parametrize(
    "x, l, expected",
    [
        (0.0, 1, 0),
        (0.74, 2, 2),
        (-0.1, 1, -1),
        (1.0, 3, 8),
    ],
)
def test_quantize_value(x, l, expected):
    assert quantize_value(x, l) == expected


def test_quantize_value_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        quantize_value(float("nan"), 1)
    with pytest.raises(InvalidInputError):
        quantize_value(0.5, 0)


def test_quantize_series_matches_scalar():
    x = [-0.3, 0.0, 0.249, 0.25, 0.999]
    assert quantize_series(x, 2).tolist() == [quantize_value(v, 2) for v in x]


def test_quantize_series_overflow():
    with pytest.raises(InvalidInputError):
        quantize_series([1e300], 60)


def test_quantize_series_keeps_large_values_apart():
    x = [1e13, 1e13, 2e13, 2.0**62, 2.0**62 + 2**10]
    assert quantize_series(x, 20).tolist() == [v * 2**20 for v in x]
    table = build_frequency_table(x, 1, 20)
    assert len(table) == 4
    assert table.nu(CellId(1, 20, (int(1e13) * 2**20,))) == pytest.approx(0.4)


def test_table_unigrams():
    table = build_frequency_table(SAMPLE, 1, 1)
    assert table.window_count == 4
    assert dict(table.counts) == {CellId(1, 1, (0,)): 2, CellId(1, 1, (1,)): 2}


def test_table_bigrams():
    table = build_frequency_table(SAMPLE, 2, 1)
    assert table.window_count == 3
    assert dict(table.counts) == {
        CellId(2, 1, (0, 0)): 1,
        CellId(2, 1, (0, 1)): 1,
        CellId(2, 1, (1, 1)): 1,
    }


def test_table_shorter_than_gram():
    table = build_frequency_table([0.3], 2, 1)
    assert table.window_count == 0
    assert len(table) == 0


def test_table_is_read_only():
    table = build_frequency_table(SAMPLE, 1, 1)
    with pytest.raises(TypeError):
        table.counts[CellId(1, 1, (5,))] = 1


def test_nu():
    assert nu(SAMPLE, CellId(1, 1, (0,))) == 0.5
    assert nu(SAMPLE, CellId(2, 1, (0, 0))) == pytest.approx(1 / 3)
    assert nu(SAMPLE, CellId(5, 1, (0,) * 5)) == 0.0


def test_nu_rejects_foreign_stratum():
    table = build_frequency_table(SAMPLE, 1, 1)
    with pytest.raises(InvalidInputError):
        table.nu(CellId(1, 2, (0,)))


def test_cell_validation_and_geometry():
    with pytest.raises(InvalidInputError):
        CellId(2, 1, (0,))
    cell = CellId(1, 2, (-1,))
    assert cell.interval(0) == (-0.25, 0.0)
    children = list(CellId(2, 1, (0, 1)).children())
    assert len(children) == 4
    assert {c.coords for c in children} == {(0, 2), (1, 2), (0, 3), (1, 3)}


@pytest.mark.parametrize(
    "x1, x2, expected",
    [
        ([0.0, 0.5], [0.25], 0.25),
        ([0.0, 1.0], [0.0, 1.0], 1.0),
    ],
)
def test_min_separation(x1, x2, expected):
    assert min_separation(x1, x2) == expected


def test_min_separation_degenerate():
    with pytest.raises(DegenerateInputError):
        min_separation([0.3, 0.3], [0.3])


@pytest.mark.parametrize(
    "n, s_min, cap, expected",
    [
        (1024, 1 / 64, 20, (10, 6)),
        (2, 0.5, 20, (1, 1)),
        (10**6, 1e-12, 20, (19, 20)),
    ],
)
def test_default_depths(n, s_min, cap, expected):
    assert default_depths(n, s_min, cap) == expected


def test_default_depths_rejects_short_input():
    with pytest.raises(InvalidInputError):
        default_depths(1, 0.5, 20)


@settings(max_examples=100, deadline=None)
@given(
    x=st.lists(values, min_size=1, max_size=30),
    m=st.integers(min_value=1, max_value=4),
    l=st.integers(min_value=1, max_value=5),
)
def test_table_frequencies_sum_to_one(x, m, l):
    table = build_frequency_table(x, m, l)
    assert table.window_count == max(0, len(x) - m + 1)
    if table.window_count:
        assert math.fsum(table.nu(cell) for cell in table.counts) == pytest.approx(1.0)
        assert sum(table.counts.values()) == table.window_count


@settings(max_examples=100, deadline=None)
@given(
    x=st.lists(values, min_size=1, max_size=25),
    y=st.lists(values, min_size=1, max_size=25),
    l=st.integers(min_value=1, max_value=4),
)
def test_gram_ids_agree_with_tables(x, y, l):
    m_max = 4
    for m, (ids_x, ids_y), n_cells in iter_gram_ids((np.array(x), np.array(y)), l, m_max):
        tx = build_frequency_table(x, m, l)
        ty = build_frequency_table(y, m, l)
        assert ids_x.size == tx.window_count
        assert ids_y.size == ty.window_count
        assert n_cells == len(set(tx.counts) | set(ty.counts))
        assert sorted(np.bincount(ids_x, minlength=n_cells)[np.unique(ids_x)].tolist()) == sorted(tx.counts.values())


@settings(max_examples=100, deadline=None)
@given(x=values, y=values, l=st.integers(min_value=1, max_value=30))
def test_quantization_is_monotone(x, y, l):
    low, high = sorted((x, y))
    assert quantize_value(low, l) <= quantize_value(high, l)


@settings(max_examples=100, deadline=None)
@given(
    x=st.lists(values, min_size=1, max_size=40),
    m=st.integers(min_value=1, max_value=3),
    l=st.integers(min_value=1, max_value=5),
)
def test_refinement_consistency(x, m, l):
    coarse = build_frequency_table(x, m, l)
    fine = build_frequency_table(x, m, l + 1)
    for cell, count in coarse.counts.items():
        assert count == sum(fine.counts.get(child, 0) for child in cell.children())


@settings(max_examples=50, deadline=None)
@given(
    x=st.lists(values, min_size=1, max_size=200),
    m=st.integers(min_value=1, max_value=4),
    l=st.integers(min_value=1, max_value=4),
)
def test_table_matches_window_recount(x, m, l):
    expected = {}
    for i in range(len(x) - m + 1):
        key = CellId(m, l, tuple(math.floor(v * 2**l) for v in x[i : i + m]))
        expected[key] = expected.get(key, 0) + 1
    assert dict(build_frequency_table(x, m, l).counts) == expected
