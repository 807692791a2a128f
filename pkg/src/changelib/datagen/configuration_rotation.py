import json
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from ..changepoint.configuration_changepoint import ChangePointTruth
from ..errors import InvalidInputError
from ..types import TimeSeries

# Rotation steps for the four processes of the reference protocol. Each is
# 0.12, 0.14, 0.16, 0.18 followed by the fractional digits of sqrt(2), sqrt(3),
# sqrt(5), sqrt(7) / 100, kept at full double precision.
DEFAULT_ALPHAS: Tuple[float, ...] = (
    0.12414213562373095,
    0.14732050807568877,
    0.16236067977499790,
    0.18645751311064591,
)
DEFAULT_U1: Tuple[float, float] = (0.0, 0.7)
DEFAULT_U2: Tuple[float, float] = (0.3, 1.0)


def _check_interval(interval, name: str) -> Tuple[float, float]:
    low, high = (float(v) for v in interval)
    if not (np.isfinite(low) and np.isfinite(high) and low < high):
        raise InvalidInputError(f"{name} must be an interval with low < high, but got {interval}")
    return low, high


@dataclass(frozen=True)
class RotationProcessSpec:
    """Irrational rotation on the circle switching between two uniforms.

    ``alpha`` is the rotation step. Double precision bounds how irrational it
    can be: the trajectory is exact only up to the mantissa.
    """

    alpha: float
    u1: Tuple[float, float] = DEFAULT_U1
    u2: Tuple[float, float] = DEFAULT_U2
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInputError(f"alpha must lie in (0, 1), but got {self.alpha}")
        object.__setattr__(self, "u1", _check_interval(self.u1, "u1"))
        object.__setattr__(self, "u2", _check_interval(self.u2, "u2"))

    @property
    def label(self) -> str:
        return f"rotation(alpha={self.alpha!r})"

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_file(cls, path: str):
        with open(path, encoding="utf-8") as fp:
            data = json.load(fp)
        return cls(**data)


@dataclass(frozen=True)
class LabeledSequence:
    """A series with its change points; segment ``k`` spans
    ``floor(n theta_{k-1}) + 1 .. floor(n theta_k)`` (1-based)."""

    series: TimeSeries
    truth: ChangePointTruth
    segment_labels: Tuple[str, ...]

    @property
    def n(self) -> int:
        return int(self.series.size)

    def change_indices(self) -> Tuple[int, ...]:
        return self.truth.change_indices(self.n)

    def segment_bounds(self) -> Tuple[Tuple[int, int], ...]:
        edges = (0,) + self.change_indices() + (self.n,)
        return tuple((a + 1, b) for a, b in zip(edges, edges[1:]))

    def segment(self, k: int) -> TimeSeries:
        """Samples of the 1-based segment ``k``."""
        first, last = self.segment_bounds()[k - 1]
        return self.series[first - 1 : last]
