import math
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError

TimeSeries = npt.NDArray[np.float64]
SeriesLike = Union[TimeSeries, Sequence[float]]


def as_time_series(x: SeriesLike, name: str = "x") -> TimeSeries:
    """Validate ``x`` and return it as a 1-D float64 array.

    A time series holds at least one sample and every sample is finite.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, but got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError(f"{name} must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidInputError(f"{name} has a non-finite sample at position {bad}: {arr[bad]}")
    return arr


def check_finite(value: float, name: str = "value") -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, but got {value}")
    return value


def rescale_unit(x: SeriesLike) -> TimeSeries:
    """Affinely map ``x`` onto [0, 1]; a constant series maps to zeros."""
    arr = as_time_series(x)
    low, high = float(arr.min()), float(arr.max())
    if high == low:
        return np.zeros_like(arr)
    return (arr - low) / (high - low)
