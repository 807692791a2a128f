import math

import pytest

from changelib.distance.frequency import CellId
from changelib.errors import InvalidInputError, UnsupportedProcessError
from changelib.oracle.brute_force import brute_force_distance
from changelib.oracle.iid import IidUniformOracle, iid_cell_probability, process_distance


@pytest.mark.parametrize(
    "oracle, cell, expected",
    [
        (IidUniformOracle.uniform(0.0, 1.0), CellId(1, 1, (0,)), 0.5),
        (IidUniformOracle.uniform(0.0, 1.0), CellId(2, 1, (0, 1)), 0.25),
        (IidUniformOracle.uniform(0.0, 0.5), CellId(1, 2, (1,)), 0.5),
        (IidUniformOracle.uniform(0.0, 0.5), CellId(1, 1, (1,)), 0.0),
    ],
)
def test_cell_probability(oracle, cell, expected):
    assert iid_cell_probability(oracle, cell) == pytest.approx(expected)


@pytest.mark.parametrize(
    "x1, x2, m_max, l_max, expected",
    [
        ([0.3, 0.9, 0.1], [0.3, 0.9, 0.1], 3, 4, 0.0),
        ([0.1, 0.2], [0.7, 0.8], 1, 1, 0.5),
        ([0.1, 0.2], [0.7, 0.8], 1, 2, 2 / 3),
    ],
)
def test_brute_force_distance_examples(x1, x2, m_max, l_max, expected):
    assert brute_force_distance(x1, x2, m_max, l_max) == pytest.approx(expected)


def test_mixture_masses():
    rho = IidUniformOracle.mixture([(0.0, 0.7), (0.3, 1.0)], [0.5, 0.5])
    assert rho.interval_mass(0.0, 1.0) == pytest.approx(1.0)
    # [0, 0.5) holds 5/7 of the first piece and 2/7 of the second
    assert rho.cell_probability(CellId(1, 1, (0,))) == pytest.approx(0.5)


@pytest.mark.parametrize(
    "pieces",
    [
        (),
        ((0.0, 1.0, 0.6),),
        ((1.0, 0.0, 1.0),),
        ((0.0, 0.5, 1.2), (0.5, 1.0, -0.2)),
    ],
)
def test_invalid_pieces(pieces):
    with pytest.raises(InvalidInputError):
        IidUniformOracle(pieces=pieces)


def test_support():
    rho = IidUniformOracle.uniform(0.0, 0.5)
    assert rho.support_coords(2) == (0, 1)
    cells = list(rho.support_cells(2, 1))
    assert cells == [CellId(2, 1, (0, 0))]
    assert math.fsum(rho.cell_probability(c) for c in rho.support_cells(3, 3)) == pytest.approx(1.0)


def test_stratum_limits():
    rho = IidUniformOracle.uniform(max_m=2)
    assert rho.stratum_total(2, 9) == 1.0
    with pytest.raises(UnsupportedProcessError):
        rho.stratum_total(3, 1)
    with pytest.raises(UnsupportedProcessError):
        rho.cell_probability(CellId(3, 1, (0, 0, 0)))


def test_process_distance():
    u = IidUniformOracle.uniform(0.0, 1.0)
    assert process_distance(u, u, 3, 3) == 0.0
    low = IidUniformOracle.uniform(0.0, 0.5)
    high = IidUniformOracle.uniform(0.5, 1.0)
    # disjoint supports differ by 2 in every stratum
    expected = 2 * sum(1 / (m * (m + 1)) for m in (1, 2)) * sum(1 / (l * (l + 1)) for l in (1, 2, 3))
    assert process_distance(low, high, 2, 3) == pytest.approx(expected)


def test_process_distance_refuses_huge_strata():
    wide = IidUniformOracle.uniform(0.0, 1000.0)
    with pytest.raises(UnsupportedProcessError):
        process_distance(wide, wide, 2, 1)
