import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from ..distance.frequency import CellId
from ..errors import InvalidInputError, UnsupportedProcessError

# process_distance enumerates cells; refuse strata larger than this.
MAX_ENUMERATED_CELLS = 1 << 16


@dataclass(frozen=True)
class IidUniformOracle:
    """An i.i.d. process whose marginal is piecewise uniform.

    ``pieces`` lists ``(low, high, mass)``: the marginal puts ``mass`` uniformly
    on ``[low, high)``. Masses sum to 1. An m-cell's probability is the product
    of its coordinate intervals' masses.
    """

    pieces: Tuple[Tuple[float, float, float], ...]
    max_m: Optional[int] = None
    max_l: Optional[int] = None

    def __post_init__(self):
        if not self.pieces:
            raise InvalidInputError("a piecewise-uniform marginal needs at least one piece")
        for low, high, mass in self.pieces:
            if not (math.isfinite(low) and math.isfinite(high) and low < high):
                raise InvalidInputError(f"invalid piece interval [{low}, {high})")
            if not mass > 0:
                raise InvalidInputError(f"piece [{low}, {high}) needs positive mass, but got {mass}")
        total = math.fsum(mass for _, _, mass in self.pieces)
        if abs(total - 1.0) > 1e-12:
            raise InvalidInputError(f"piece masses must sum to 1, but sum to {total}")

    @classmethod
    def uniform(cls, low: float = 0.0, high: float = 1.0, **kwargs):
        return cls(pieces=((float(low), float(high), 1.0),), **kwargs)

    @classmethod
    def mixture(cls, intervals: Sequence[Tuple[float, float]], weights: Sequence[float], **kwargs):
        """Mixture of uniforms; overlapping intervals are allowed."""
        if len(intervals) != len(weights):
            raise InvalidInputError("mixture needs one weight per interval")
        pieces = tuple((float(lo), float(hi), float(w)) for (lo, hi), w in zip(intervals, weights))
        return cls(pieces=pieces, **kwargs)

    def interval_mass(self, low: float, high: float) -> float:
        mass = 0.0
        for p_low, p_high, p_mass in self.pieces:
            overlap = min(high, p_high) - max(low, p_low)
            if overlap > 0:
                mass += p_mass * overlap / (p_high - p_low)
        return mass

    def supports(self, m: int, l: int) -> bool:
        return (self.max_m is None or m <= self.max_m) and (self.max_l is None or l <= self.max_l)

    def cell_probability(self, cell: CellId) -> float:
        if not self.supports(cell.m, cell.l):
            raise UnsupportedProcessError(f"oracle has no stratum (m={cell.m}, l={cell.l})")
        prob = 1.0
        for axis in range(cell.m):
            prob *= self.interval_mass(*cell.interval(axis))
            if prob == 0.0:
                break
        return prob

    def stratum_total(self, m: int, l: int) -> float:
        if not self.supports(m, l):
            raise UnsupportedProcessError(f"oracle has no stratum (m={m}, l={l})")
        return 1.0

    def support_coords(self, l: int) -> Tuple[int, ...]:
        """Level-``l`` coordinates whose interval carries positive mass."""
        scale = 2.0**l
        coords = set()
        for low, high, _ in self.pieces:
            coords.update(range(math.floor(low * scale), math.ceil(high * scale)))
        return tuple(sorted(c for c in coords if self.interval_mass(c / scale, (c + 1) / scale) > 0))

    def support_cells(self, m: int, l: int) -> Iterator[CellId]:
        for coords in itertools.product(self.support_coords(l), repeat=m):
            yield CellId(m, l, coords)


def iid_cell_probability(oracle: IidUniformOracle, cell: CellId) -> float:
    return oracle.cell_probability(cell)


def process_distance(rho1: IidUniformOracle, rho2: IidUniformOracle, m_max: int, l_max: int) -> float:
    """Distributional distance between two oracles, truncated at ``(m_max, l_max)``."""
    total = 0.0
    for m in range(1, m_max + 1):
        for l in range(1, l_max + 1):
            coords = sorted(set(rho1.support_coords(l)) | set(rho2.support_coords(l)))
            if len(coords) ** m > MAX_ENUMERATED_CELLS:
                raise UnsupportedProcessError(
                    f"stratum (m={m}, l={l}) has {len(coords) ** m} support cells; enumeration refused"
                )
            stratum = 0.0
            for cell_coords in itertools.product(coords, repeat=m):
                cell = CellId(m, l, cell_coords)
                stratum += abs(rho1.cell_probability(cell) - rho2.cell_probability(cell))
            total += stratum / (m * (m + 1)) / (l * (l + 1))
    return total
