"""Empirical distributional distance and the operators built on it.

``empirical_distance`` is the truncated plug-in estimate

    d(x1, x2) = sum_{m <= m_max} sum_{l <= l_max} w_m w_l sum_B |nu(x1, B) - nu(x2, B)|

with ``w_k = 1 / (k (k + 1))``; the inner sum runs over occupied cells only
since unoccupied cells contribute nothing. ``score_delta`` compares the two
halves of a window and ``estimate_single`` scans one window for the split that
maximises the distance between its extended left and right parts.

Once every window of a stratum sits in its own cell the stratum's sum no
longer depends on the data, and that stays true for every finer resolution
and longer gram. Both kernels detect this and fill the remaining strata in
closed form.
"""

import logging
import math
from typing import Optional, Protocol

import numpy as np

from ..errors import DegenerateWindowError, InvalidInputError, UnsupportedProcessError
from ..types import SeriesLike, TimeSeries, as_time_series
from .configuration_distance import DistanceParams, depth_weights
from .frequency import CellId, build_frequency_table, iter_gram_ids

logger = logging.getLogger(__name__)

# Split scores closer than this to the maximum count as tied.
TIE_TOLERANCE = 1e-12

# Upper bound on the entries of one prefix-count block in split_profile.
_BLOCK_ENTRIES = 1 << 22


class ProcessOracle(Protocol):
    """Closed-form cell probabilities of a known process distribution."""

    def supports(self, m: int, l: int) -> bool: ...

    def cell_probability(self, cell: CellId) -> float: ...

    def stratum_total(self, m: int, l: int) -> float: ...


def _distinct_mass(n1: int, n2: int, m: int) -> float:
    # every window in its own cell: each non-empty side contributes its full mass
    return float(n1 >= m) + float(n2 >= m)


def stratum_sums(x1: TimeSeries, x2: TimeSeries, m_max: int, l_max: int) -> np.ndarray:
    """``sum_B |nu(x1, B) - nu(x2, B)|`` for every stratum, shape ``(m_max, l_max)``."""
    n1, n2 = x1.size, x2.size
    sums = np.zeros((m_max, l_max), dtype=np.float64)
    limit = m_max
    for l in range(1, l_max + 1):
        if limit == 0:
            break
        for m, (ids1, ids2), n_cells in iter_gram_ids((x1, x2), l, limit):
            if n_cells == ids1.size + ids2.size:
                for mm in range(m, m_max + 1):
                    sums[mm - 1, l - 1 :] = _distinct_mass(n1, n2, mm)
                limit = m - 1
                break
            f1 = np.bincount(ids1, minlength=n_cells) / max(ids1.size, 1)
            f2 = np.bincount(ids2, minlength=n_cells) / max(ids2.size, 1)
            sums[m - 1, l - 1] = np.abs(f1 - f2).sum()
    return sums


def empirical_distance(x1: SeriesLike, x2: SeriesLike, p: Optional[DistanceParams] = None) -> float:
    a = as_time_series(x1, "x1")
    b = as_time_series(x2, "x2")
    p = (p or DistanceParams()).resolve(a, b)
    sums = stratum_sums(a, b, p.m_max, p.l_max)
    return float(depth_weights(p.m_max) @ sums @ depth_weights(p.l_max))


def distance_to_process(x: SeriesLike, rho: ProcessOracle, p: Optional[DistanceParams] = None) -> float:
    """Empirical distance between a sequence and a known process.

    Unoccupied cells contribute ``rho(B)`` each, which sums to the stratum
    total minus the mass of the occupied cells.
    """
    arr = as_time_series(x)
    p = (p or DistanceParams()).resolve(arr)
    wm, wl = depth_weights(p.m_max), depth_weights(p.l_max)
    total = 0.0
    for m in range(1, p.m_max + 1):
        for l in range(1, p.l_max + 1):
            if not rho.supports(m, l):
                raise UnsupportedProcessError(f"process oracle has no stratum (m={m}, l={l})")
            table = build_frequency_table(arr, m, l)
            occupied = 0.0
            stratum = 0.0
            for cell in table.counts:
                prob = rho.cell_probability(cell)
                occupied += prob
                stratum += abs(table.nu(cell) - prob)
            stratum += rho.stratum_total(m, l) - occupied
            total += wm[m - 1] * wl[l - 1] * stratum
    return total


def _check_index_range(n: int, a: int, b: int):
    if not (1 <= a <= n and 1 <= b <= n):
        raise InvalidInputError(f"window ({a}, {b}) lies outside 1..{n}")


def score_delta(x: SeriesLike, a: int, b: int, p: Optional[DistanceParams] = None) -> float:
    """Distance between the two halves of the window ``X[a..b]`` (1-based, inclusive)."""
    arr = as_time_series(x)
    _check_index_range(arr.size, a, b)
    if a >= b:
        raise DegenerateWindowError(f"window ({a}, {b}) cannot be split into two halves")
    left = arr[a - 1 : (a + b) // 2]
    right = arr[(a + b + 1) // 2 - 1 : b]
    return empirical_distance(left, right, p)


def _distinct_profile(size: int, m: int, splits: np.ndarray) -> np.ndarray:
    n_left = splits - m + 2
    n_right = size - m - splits + 1
    if m > 1:
        return np.full(splits.shape, 2.0)
    # for m = 1 the split sample is a window of both operands
    return (n_left - 1) / n_left + (n_right - 1) / n_right + np.abs(1.0 / n_left - 1.0 / n_right)


def _stratum_profile(ids: np.ndarray, n_cells: int, size: int, m: int, splits: np.ndarray) -> np.ndarray:
    """Stratum sum of ``d(w[:s+1], w[s:])`` for each split ``s`` of a window ``w``.

    Cells seen once are handled through prefix counts; the others through
    blocks of per-cell prefix counts.
    """
    n_windows = ids.size
    n_left = (splits - m + 2).astype(np.float64)
    n_right = (size - m - splits + 1).astype(np.float64)
    left_end = splits - m + 2
    right_start = splits

    occurrences = np.bincount(ids, minlength=n_cells)
    single = occurrences[ids] == 1
    prefix = np.concatenate(([0], np.cumsum(single)))
    count_left = prefix[left_end]
    count_right = prefix[n_windows] - prefix[right_start]
    if m == 1:
        shared = single[splits].astype(np.float64)
    else:
        shared = np.zeros(splits.shape)
    profile = (
        (count_left - shared) / n_left
        + (count_right - shared) / n_right
        + shared * np.abs(1.0 / n_left - 1.0 / n_right)
    )

    repeated = np.flatnonzero(occurrences > 1)
    if repeated.size == 0:
        return profile
    column = np.full(n_cells, -1, dtype=np.int64)
    column[repeated] = np.arange(repeated.size)
    positions = np.flatnonzero(~single)
    columns = column[ids[positions]]

    block = max(1, _BLOCK_ENTRIES // (n_windows + 1))
    for start in range(0, repeated.size, block):
        stop = min(start + block, repeated.size)
        keep = (columns >= start) & (columns < stop)
        counts = np.zeros((n_windows + 1, stop - start), dtype=np.int32)
        counts[positions[keep] + 1, columns[keep] - start] = 1
        counts = counts.cumsum(axis=0)
        left = counts[left_end] / n_left[:, None]
        right = (counts[n_windows] - counts[right_start]) / n_right[:, None]
        profile += np.abs(left - right).sum(axis=1)
    return profile


def split_profile(window: TimeSeries, splits: np.ndarray, m_max: int, l_max: int) -> np.ndarray:
    """``d(window[:s+1], window[s:])`` for every 0-based split ``s`` in ``splits``.

    Both operands must hold at least ``m_max`` samples at every split.
    """
    size = window.size
    splits = np.asarray(splits, dtype=np.int64)
    wm, wl = depth_weights(m_max), depth_weights(l_max)
    total = np.zeros(splits.shape, dtype=np.float64)
    limit = m_max
    for l in range(1, l_max + 1):
        if limit == 0:
            break
        for m, (ids,), n_cells in iter_gram_ids((window,), l, limit):
            if n_cells == ids.size:
                for mm in range(m, m_max + 1):
                    total += wm[mm - 1] * wl[l - 1 :].sum() * _distinct_profile(size, mm, splits)
                limit = m - 1
                break
            total += wm[m - 1] * wl[l - 1] * _stratum_profile(ids, n_cells, size, m, splits)
    return total


def first_argmax(scores: np.ndarray, tolerance: float = TIE_TOLERANCE) -> int:
    """Index of the first score within ``tolerance`` of the maximum."""
    return int(np.flatnonzero(scores >= scores.max() - tolerance)[0])


def estimate_single(
    x: SeriesLike, a: int, b: int, alpha: float, p: Optional[DistanceParams] = None
) -> int:
    """Split point ``t`` in ``a..b`` maximising ``d(X[a'..t], X[t..b'])``.

    The operands reach ``floor(n * alpha)`` samples beyond the window on
    either side, clipped to ``1..n``. Only splits leaving both operands
    ``max(2, m_max)`` samples are admissible; ties go to the smallest ``t``.
    """
    arr = as_time_series(x)
    n = arr.size
    _check_index_range(n, a, b)
    if a > b:
        raise DegenerateWindowError(f"window ({a}, {b}) is empty")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInputError(f"alpha must lie in [0, 1], but got {alpha}")

    reach = math.floor(n * alpha)
    lo = max(1, a - reach)
    hi = min(n, b + reach)
    window = arr[lo - 1 : hi]
    half = window.size // 2
    # automatic depths are fixed once per window, from its two halves, and shared by every split
    p = (p or DistanceParams()).resolve(window[: max(half, 1)], window[half:])

    margin = max(2, p.m_max)
    first = max(a, lo + margin - 1)
    last = min(b, hi - margin + 1)
    if first > last:
        raise DegenerateWindowError(
            f"no split in {a}..{b} leaves {margin} samples on both sides of {lo}..{hi}"
        )
    ts = np.arange(first, last + 1)
    scores = split_profile(window, ts - lo, p.m_max, p.l_max)
    best = int(ts[first_argmax(scores)])
    logger.debug(
        "single estimate over %d..%d (operands %d..%d, depths %d/%d): t=%d", a, b, lo, hi, p.m_max, p.l_max, best
    )
    return best
