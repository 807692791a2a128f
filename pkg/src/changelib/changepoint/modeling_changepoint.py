"""Multiple change point estimation over multi-resolution grids.

For every ``j = 1..floor(log2 n)`` and offset ``t = 1..kappa+1`` a grid of
boundaries ``n / (3 * 2**j)`` apart is laid over the series. The ``kappa``
grid segments with the highest score each yield one candidate through the
single change point estimator, and the grid is weighted by ``2**-j`` times its
performance score ``gamma(t, j)``. The estimate of ``theta_k`` is the weighted
mean of the k-th smallest candidates over all grids, divided by ``n``.
"""

import logging
from typing import List, Optional, Tuple

from ..distance.configuration_distance import DistanceParams
from ..distance.modeling_distance import estimate_single, score_delta
from ..errors import (
    DegenerateWindowError,
    GridTooFineError,
    InvalidInputError,
    NoSignalError,
)
from ..types import SeriesLike, TimeSeries, as_time_series
from .configuration_changepoint import ChangePointTruth, EstimateReport, GridRecord, GridSpec, iteration_weight

logger = logging.getLogger(__name__)


def grid_boundaries(n: int, j: int, t: int) -> GridSpec:
    """Boundaries ``floor(n * alpha_j * (i + 1/(t+1)))`` for ``i = 0..3 * 2**j - 1``.

    Computed in integer arithmetic: ``floor(n ((t+1) i + 1) / (3 * 2**j * (t+1)))``.
    """
    if j < 1 or t < 1:
        raise InvalidInputError(f"grid needs j >= 1 and t >= 1, but got j={j}, t={t}")
    steps = 3 * 2**j
    if n < steps:
        raise GridTooFineError(f"grid j={j} spaces boundaries {n / steps:.3g} samples apart for n={n}")
    denominator = steps * (t + 1)
    boundaries = tuple(n * ((t + 1) * i + 1) // denominator for i in range(steps))
    return GridSpec(n=n, j=j, t=t, boundaries=boundaries)


def _safe_delta(x: TimeSeries, a: int, b: int, p: DistanceParams) -> float:
    try:
        return score_delta(x, max(a, 1), b, p)
    except DegenerateWindowError:
        return 0.0


def segment_scores(x: SeriesLike, g: GridSpec, p: Optional[DistanceParams] = None) -> List[Tuple[int, float]]:
    """``(i, Delta(b_{i-1}, b_i))`` for every segment ``i`` of the grid."""
    arr = as_time_series(x)
    p = p or DistanceParams()
    b = g.boundaries
    return [(i, _safe_delta(arr, b[i - 1], b[i], p)) for i in range(1, len(b))]


def grid_gamma(x: SeriesLike, g: GridSpec, kappa: int, p: Optional[DistanceParams] = None) -> float:
    """Performance score of a grid.

    For each offset ``l = 0..2`` the grid is cut into windows of three
    segments; ``gamma_l`` is the kappa-th largest window score and the grid
    scores ``min(gamma_0, gamma_1, gamma_2)``. An offset with fewer than
    ``kappa`` windows scores the grid 0.
    """
    arr = as_time_series(x)
    p = p or DistanceParams()
    b = g.boundaries
    last = len(b) - 1
    gammas = []
    for offset in range(3):
        count = (last - offset) // 3
        if count < kappa:
            return 0.0
        scores = sorted(
            (_safe_delta(arr, b[offset + 3 * (i - 1)], b[offset + 3 * i], p) for i in range(1, count + 1)),
            reverse=True,
        )
        gammas.append(scores[kappa - 1])
    return min(gammas)


def _grid_record(x: TimeSeries, j: int, t: int, kappa: int, p: DistanceParams) -> GridRecord:
    try:
        g = grid_boundaries(x.size, j, t)
    except GridTooFineError:
        return GridRecord(j=j, t=t, weight=iteration_weight(j), gamma=0.0, skipped="grid_too_fine")
    weight = g.weight

    min_segment = max(2, p.m_max or 2)
    if g.spacing < min_segment:
        return GridRecord(j=j, t=t, weight=weight, gamma=0.0, skipped="segments_too_short")

    gamma = grid_gamma(x, g, kappa, p)
    if gamma == 0.0:
        return GridRecord(j=j, t=t, weight=weight, gamma=0.0, skipped="zero_score")

    scores = segment_scores(x, g, p)
    selected = sorted(scores, key=lambda item: (-item[1], item[0]))[:kappa]
    try:
        candidates = sorted(
            estimate_single(x, max(g.boundaries[i - 1], 1), g.boundaries[i], g.alpha, p) for i, _ in selected
        )
    except DegenerateWindowError:
        return GridRecord(j=j, t=t, weight=weight, gamma=0.0, skipped="no_admissible_split")
    return GridRecord(j=j, t=t, weight=weight, gamma=gamma, candidates=tuple(candidates))


def estimate_changepoints(
    x: SeriesLike, kappa: int, p: Optional[DistanceParams] = None, seed: Optional[int] = None
) -> EstimateReport:
    """Estimate ``kappa`` change point parameters of ``x``.

    ``seed`` is only echoed into the report. Raises ``NoSignalError`` when
    every grid scores zero.
    """
    arr = as_time_series(x)
    if int(kappa) != kappa or kappa < 1:
        raise InvalidInputError(f"kappa must be a positive integer, but got {kappa}")
    p = p or DistanceParams()
    n = arr.size

    grids = []
    for j in range(1, n.bit_length()):
        for t in range(1, kappa + 2):
            record = _grid_record(arr, j, t, kappa, p)
            logger.debug(
                "grid j=%d t=%d: gamma=%r candidates=%s %s",
                j, t, record.gamma, record.candidates, record.skipped or "",
            )
            grids.append(record)

    eta = 0.0
    sums = [0.0] * kappa
    for record in grids:
        if record.gamma == 0.0:
            continue
        w = record.weight * record.gamma
        eta += w
        for k, candidate in enumerate(record.candidates):
            sums[k] += w * candidate
    if eta == 0.0:
        raise NoSignalError(f"all {len(grids)} grids scored zero on a series of length {n}")

    theta_hat = tuple(s / (n * eta) for s in sums)
    return EstimateReport(n=n, kappa=kappa, theta_hat=theta_hat, eta=eta, grids=tuple(grids), params=p, seed=seed)


def error_rate(report: EstimateReport, truth: ChangePointTruth) -> float:
    """``sum_k |theta_hat_k - theta_k|``."""
    if report.kappa != truth.kappa:
        raise InvalidInputError(f"report has {report.kappa} change points but truth has {truth.kappa}")
    return sum(abs(a - b) for a, b in zip(report.theta_hat, truth.theta))
