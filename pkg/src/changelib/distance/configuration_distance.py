import json
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from ..errors import DegenerateInputError, InvalidInputError
from ..types import SeriesLike, as_time_series
from .frequency import default_depths, min_separation


def depth_weight(k: int) -> float:
    """Summable weight ``1 / (k (k + 1))`` shared by the gram and resolution axes."""
    return 1.0 / (k * (k + 1))


def depth_weights(k_max: int) -> np.ndarray:
    k = np.arange(1, k_max + 1, dtype=np.float64)
    return 1.0 / (k * (k + 1.0))


@dataclass(frozen=True)
class DistanceParams:
    """Truncation depths of the empirical distributional distance.

    ``m_max`` bounds the gram length and ``l_max`` the resolution level. A
    depth left as ``None`` is resolved per call from the operands (see
    ``resolve``); ``l_cap`` bounds a resolved ``l_max``.
    """

    m_max: Optional[int] = None
    l_max: Optional[int] = None
    l_cap: int = 20

    def __post_init__(self):
        for name in ("m_max", "l_max"):
            value = getattr(self, name)
            if value is not None and (int(value) != value or value < 1):
                raise InvalidInputError(f"{name} must be a positive integer, but got {value}")
        if int(self.l_cap) != self.l_cap or self.l_cap < 1:
            raise InvalidInputError(f"l_cap must be a positive integer, but got {self.l_cap}")

    @property
    def is_resolved(self) -> bool:
        return self.m_max is not None and self.l_max is not None

    def resolve(self, *operands: SeriesLike) -> "DistanceParams":
        """Fill unset depths from ``default_depths`` on the shortest operand.

        The resolution gap is the smallest separation over all operands; when
        every value is equal the resolution falls back to ``l_cap``.
        """
        if self.is_resolved:
            return self
        arrays = [as_time_series(op, "operand") for op in operands]
        n_short = min(a.size for a in arrays)
        joint = np.concatenate(arrays)
        try:
            s_min = min_separation(joint, joint)
        except DegenerateInputError:
            s_min = None

        if n_short >= 2 and s_min is not None:
            m_auto, l_auto = default_depths(n_short, s_min, self.l_cap)
        else:
            m_auto = 1 if n_short < 2 else default_depths(n_short, 1.0, self.l_cap)[0]
            l_auto = self.l_cap if s_min is None else default_depths(2, s_min, self.l_cap)[1]
        return replace(
            self,
            m_max=self.m_max if self.m_max is not None else m_auto,
            l_max=self.l_max if self.l_max is not None else l_auto,
        )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_file(cls, path: str):
        with open(path, encoding="utf-8") as fp:
            data = json.load(fp)
        return cls(**data)
