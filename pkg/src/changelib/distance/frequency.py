"""Multi-resolution quantization and sparse m-gram frequency counting.

A cell of stratum ``(m, l)`` is an origin-anchored cube of side ``2**-l`` in
``R**m``; it is named by the integer coordinates of its lower corner, so the
coordinate ``c`` stands for the interval ``[c * 2**-l, (c + 1) * 2**-l)``.
Only occupied cells are ever stored.

Two counting paths live here. ``build_frequency_table`` returns an explicit
``CellId -> count`` table for one stratum. ``iter_gram_ids`` is the kernel
behind every distance evaluation: per resolution it quantizes the series once,
then labels each m-gram window with a dense integer cell id for all
``m <= m_max`` by renumbering ``(id of the (m-1)-gram, next symbol)`` pairs, so
two windows share an id exactly when they fall in the same cell.
"""

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import DegenerateInputError, InvalidInputError
from ..types import SeriesLike, as_time_series, check_finite


@dataclass(frozen=True)
class CellId:
    m: int
    l: int
    coords: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 1 or self.l < 1:
            raise InvalidInputError(f"cell needs m >= 1 and l >= 1, but got m={self.m}, l={self.l}")
        if len(self.coords) != self.m:
            raise InvalidInputError(
                f"cell of gram length {self.m} needs {self.m} coordinates, but got {len(self.coords)}"
            )

    def interval(self, axis: int) -> Tuple[float, float]:
        c = self.coords[axis]
        return math.ldexp(c, -self.l), math.ldexp(c + 1, -self.l)

    def children(self) -> Iterator["CellId"]:
        """The ``2**m`` cells of level ``l + 1`` that tile this cell."""
        for bits in range(2**self.m):
            coords = tuple(2 * c + ((bits >> axis) & 1) for axis, c in enumerate(self.coords))
            yield CellId(self.m, self.l + 1, coords)


@dataclass(frozen=True)
class FrequencyTable:
    m: int
    l: int
    counts: Mapping[CellId, int] = field(default_factory=dict)
    window_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    def nu(self, cell: CellId) -> float:
        if cell.m != self.m or cell.l != self.l:
            raise InvalidInputError(
                f"cell of stratum ({cell.m}, {cell.l}) queried in table of stratum ({self.m}, {self.l})"
            )
        if self.window_count == 0:
            return 0.0
        return self.counts.get(cell, 0) / self.window_count

    def __len__(self) -> int:
        return len(self.counts)


def _check_level(value: int, name: str) -> int:
    if int(value) != value or value < 1:
        raise InvalidInputError(f"{name} must be a positive integer, but got {value}")
    return int(value)


def quantize_value(x: float, l: int) -> int:
    """Return the coordinate ``c`` with ``x`` in ``[c * 2**-l, (c + 1) * 2**-l)``."""
    x = check_finite(x, "x")
    l = _check_level(l, "l")
    return math.floor(math.ldexp(x, l))


def quantize_series(x: SeriesLike, l: int) -> np.ndarray:
    """Quantize every sample of ``x`` at resolution ``l``.

    Coordinates stay float64 and are exact: past ``2**53`` every double is
    already an integer, so distinct samples keep distinct coordinates.
    """
    arr = as_time_series(x)
    l = _check_level(l, "l")
    scaled = np.floor(np.ldexp(arr, l))
    if not np.isfinite(scaled).all():
        raise InvalidInputError(f"resolution l={l} overflows float64 for values up to {np.abs(arr).max()}")
    return scaled


def build_frequency_table(x: SeriesLike, m: int, l: int) -> FrequencyTable:
    arr = as_time_series(x)
    m = _check_level(m, "m")
    l = _check_level(l, "l")
    n = arr.size
    if n < m:
        return FrequencyTable(m=m, l=l, counts={}, window_count=0)

    windows = sliding_window_view(quantize_series(arr, l), m)
    cells, counts = np.unique(windows, axis=0, return_counts=True)
    table = {
        CellId(m, l, tuple(int(c) for c in coords)): int(count)
        for coords, count in zip(cells, counts)
    }
    return FrequencyTable(m=m, l=l, counts=table, window_count=n - m + 1)


def nu(x: SeriesLike, cell: CellId, table: Optional[FrequencyTable] = None) -> float:
    """Frequency with which the m-gram windows of ``x`` fall in ``cell``."""
    if table is None:
        table = build_frequency_table(x, cell.m, cell.l)
    return table.nu(cell)


def min_separation(x1: SeriesLike, x2: SeriesLike) -> float:
    """Smallest gap between two distinct values drawn from either sequence."""
    values = np.unique(np.concatenate([as_time_series(x1, "x1"), as_time_series(x2, "x2")]))
    if values.size < 2:
        raise DegenerateInputError(f"all samples equal {values[0]}; no distinct pair exists")
    return float(np.diff(values).min())


def default_depths(n: int, s_min: float, cap: int) -> Tuple[int, int]:
    """Truncation depths ``(m_max, l_max)`` for sequences of length ``n``.

    ``m_max = floor(log2 n)`` and ``l_max = ceil(log2(1 / s_min))``, both at
    least 1, with ``l_max`` capped at ``cap``.
    """
    if n < 2:
        raise InvalidInputError(f"n must be at least 2, but got {n}")
    if not s_min > 0:
        raise InvalidInputError(f"s_min must be positive, but got {s_min}")
    cap = _check_level(cap, "cap")
    m_max = max(1, int(n).bit_length() - 1)
    l_max = max(1, math.ceil(-math.log2(s_min)))
    return m_max, min(cap, l_max)


def iter_gram_ids(
    series: Sequence[SeriesLike], l: int, m_max: int
) -> Iterator[Tuple[int, List[np.ndarray], int]]:
    """Label the m-gram windows of several series at resolution ``l``.

    Yields ``(m, ids, n_cells)`` for ``m = 1..m_max`` where ``ids[k][i]`` is the
    cell id of window ``i`` of ``series[k]`` and ids run over ``0..n_cells-1``.
    Ids are shared across the series: equal ids mean the same cell. A series
    shorter than ``m`` gets an empty id array.
    """
    quantized = [quantize_series(s, l) for s in series]
    sizes = [q.size for q in quantized]
    symbols, inverse = np.unique(np.concatenate(quantized), return_inverse=True)
    n_symbols = symbols.size
    ranks = np.split(inverse.astype(np.int64), np.cumsum(sizes)[:-1])

    ids = ranks
    n_cells = n_symbols
    yield 1, ids, n_cells
    for m in range(2, m_max + 1):
        codes = [
            prev[:-1] * n_symbols + rank[m - 1 :] if size >= m else np.empty(0, dtype=np.int64)
            for prev, rank, size in zip(ids, ranks, sizes)
        ]
        joint = np.concatenate(codes)
        if joint.size == 0:
            ids = codes
            n_cells = 0
        else:
            _, inverse = np.unique(joint, return_inverse=True)
            n_cells = int(inverse.max()) + 1
            ids = np.split(inverse.astype(np.int64), np.cumsum([c.size for c in codes])[:-1])
        yield m, ids, n_cells

