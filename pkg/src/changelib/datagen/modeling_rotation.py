"""Synthetic stationary ergodic data with known change points.

Random streams come from numpy's PCG64 seeded through ``SeedSequence``. A
master seed yields one child stream per segment (``SeedSequence(seed).spawn``)
and one per experiment cell (``SeedSequence(seed, spawn_key=key)``), so any
stream can be regenerated without replaying the others.
"""

import itertools
import logging
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..changepoint.configuration_changepoint import ChangePointTruth
from ..errors import InfeasibleConfigError, InvalidInputError
from ..types import TimeSeries
from .configuration_rotation import LabeledSequence, RotationProcessSpec

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, None]

# Rejection draws before random_changepoints samples the feasible set directly.
MAX_REJECTIONS = 10_000


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def make_rng(seed: SeedLike) -> np.random.Generator:
    seed = as_seed_sequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


def child_seed(master_seed: int, *key: int) -> np.random.SeedSequence:
    """Stream for the experiment cell ``key`` under ``master_seed``."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


def rotation_trajectory(alpha: float, r0: float, m: int) -> Tuple[float, ...]:
    """``r_1..r_m`` with ``r_i = r_{i-1} + alpha mod 1``."""
    steps = itertools.accumulate(itertools.repeat(alpha, m), lambda r, a: (r + a) % 1.0, initial=r0)
    return tuple(itertools.islice(steps, 1, None))


def rotation_sample(
    spec: RotationProcessSpec,
    m: int,
    rng: Optional[np.random.Generator] = None,
    r0: Optional[float] = None,
) -> TimeSeries:
    """Draw ``m`` samples of the rotation process.

    Each step draws from both uniforms and keeps the first when
    ``r_i <= 0.5``, the second otherwise. ``r0`` overrides the random start.
    """
    if m < 1:
        raise InvalidInputError(f"m must be at least 1, but got {m}")
    if rng is None:
        rng = make_rng(spec.seed)
    start = rng.random() if r0 is None else float(r0)
    r = np.array(rotation_trajectory(spec.alpha, start, m))
    draws = rng.random((m, 2))
    (low1, high1), (low2, high2) = spec.u1, spec.u2
    y1 = low1 + (high1 - low1) * draws[:, 0]
    y2 = low2 + (high2 - low2) * draws[:, 1]
    return np.where(r <= 0.5, y1, y2)


def random_changepoints(kappa: int, lambda_min: float, seed: SeedLike = None) -> ChangePointTruth:
    """``kappa`` change point parameters at least ``lambda_min`` apart, edges included.

    Feasibility ``(kappa + 1) * lambda_min <= 1`` is checked exactly on the
    given double. When it holds with equality the evenly spaced placement is
    the only solution.
    """
    if int(kappa) != kappa or kappa < 1:
        raise InvalidInputError(f"kappa must be a positive integer, but got {kappa}")
    if not lambda_min > 0:
        raise InvalidInputError(f"lambda_min must be positive, but got {lambda_min}")
    room = 1 - (kappa + 1) * Fraction(lambda_min)
    if room < 0:
        raise InfeasibleConfigError(
            f"{kappa} change points at least {lambda_min} apart do not fit in (0, 1)"
        )
    if room == 0:
        return ChangePointTruth(theta=tuple(lambda_min * k for k in range(1, kappa + 1)))

    rng = make_rng(seed)
    for _ in range(MAX_REJECTIONS):
        theta = np.sort(rng.random(kappa))
        gaps = np.diff(np.concatenate(([0.0], theta, [1.0])))
        if gaps.min() >= lambda_min:
            return ChangePointTruth(theta=tuple(theta))

    # uniform over the same feasible set: shrink the free room, then re-insert the gaps
    logger.debug("rejection sampling exhausted for kappa=%d, lambda_min=%r", kappa, lambda_min)
    free = np.sort(rng.random(kappa)) * float(room)
    return ChangePointTruth(theta=tuple(free + lambda_min * np.arange(1, kappa + 1)))


def _segment_bounds(n: int, truth: ChangePointTruth) -> Tuple[int, ...]:
    edges = (0,) + truth.change_indices(n) + (n,)
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise InvalidInputError(f"n={n} leaves an empty segment for change points {truth.theta}")
    return edges


def compose_sequence(
    n: int,
    truth: ChangePointTruth,
    specs: Sequence[RotationProcessSpec],
    seed: SeedLike = None,
) -> LabeledSequence:
    """Concatenate ``kappa + 1`` rotation segments at the change points of ``truth``.

    Segment ``k`` draws from the k-th child stream of ``seed``; the specs' own
    seeds are ignored.
    """
    if len(specs) != truth.kappa + 1:
        raise InvalidInputError(f"{truth.kappa} change points need {truth.kappa + 1} specs, but got {len(specs)}")
    for k, (left, right) in enumerate(zip(specs, specs[1:]), start=1):
        if left.alpha == right.alpha:
            raise InvalidInputError(f"segments {k} and {k + 1} share alpha={left.alpha}; no change at their boundary")
    edges = _segment_bounds(n, truth)

    streams = as_seed_sequence(seed).spawn(len(specs))
    segments = [
        rotation_sample(spec, b - a, rng=make_rng(stream))
        for spec, stream, a, b in zip(specs, streams, edges, edges[1:])
    ]
    return LabeledSequence(
        series=np.concatenate(segments),
        truth=truth,
        segment_labels=tuple(spec.label for spec in specs),
    )


def block_uniform_sequence(
    n: int,
    truth: ChangePointTruth,
    intervals: Sequence[Tuple[float, float]],
    seed: SeedLike = None,
) -> LabeledSequence:
    """Concatenate i.i.d. uniform blocks, one interval per segment."""
    if len(intervals) != truth.kappa + 1:
        raise InvalidInputError(
            f"{truth.kappa} change points need {truth.kappa + 1} intervals, but got {len(intervals)}"
        )
    edges = _segment_bounds(n, truth)
    streams = as_seed_sequence(seed).spawn(len(intervals))
    segments = [
        make_rng(stream).uniform(low, high, b - a)
        for (low, high), stream, a, b in zip(intervals, streams, edges, edges[1:])
    ]
    return LabeledSequence(
        series=np.concatenate(segments),
        truth=truth,
        segment_labels=tuple(f"uniform[{low}, {high}]" for low, high in intervals),
    )
