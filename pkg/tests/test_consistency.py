"""Monte Carlo behaviour of the estimators. Run with ``pytest -m slow``."""

import time

import numpy as np
import pytest

from changelib.changepoint.configuration_changepoint import ChangePointTruth
from changelib.changepoint.modeling_changepoint import estimate_changepoints, grid_boundaries, grid_gamma, segment_scores
from changelib.datagen.configuration_rotation import DEFAULT_ALPHAS, RotationProcessSpec
from changelib.datagen.modeling_rotation import (
    block_uniform_sequence,
    child_seed,
    compose_sequence,
    make_rng,
    rotation_sample,
)
from changelib.distance.configuration_distance import DistanceParams
from changelib.distance.frequency import build_frequency_table
from changelib.distance.modeling_distance import empirical_distance
from changelib.pipelines.experiment import ExperimentConfig, ExperimentPipeline, summarize

pytestmark = pytest.mark.slow

# Pilot mean total error of the default rotation protocol at n=10000 (8 runs).
PILOT_ROTATION_ERROR = 0.2911


def test_distance_vanishes_for_one_process():
    spec = RotationProcessSpec(alpha=DEFAULT_ALPHAS[0])
    p = DistanceParams(m_max=3, l_max=5)
    medians = []
    for n in (1024, 16384):
        medians.append(
            np.median(
                [
                    empirical_distance(
                        rotation_sample(spec, n, rng=make_rng(child_seed(1, n, run, 0))),
                        rotation_sample(spec, n, rng=make_rng(child_seed(1, n, run, 1))),
                        p,
                    )
                    for run in range(20)
                ]
            )
        )
    assert medians[1] < medians[0]


def test_distance_separates_two_processes():
    first = RotationProcessSpec(alpha=DEFAULT_ALPHAS[0])
    second = RotationProcessSpec(alpha=DEFAULT_ALPHAS[3])
    p = DistanceParams(m_max=3, l_max=5)
    n = 16384
    same, different = [], []
    for run in range(20):
        x = rotation_sample(first, n, rng=make_rng(child_seed(2, run, 0)))
        same.append(empirical_distance(x, rotation_sample(first, n, rng=make_rng(child_seed(2, run, 1))), p))
        different.append(empirical_distance(x, rotation_sample(second, n, rng=make_rng(child_seed(2, run, 2))), p))
    assert np.median(different) >= 3 * np.median(same)


def test_grid_score_tracks_process_distance():
    truth = ChangePointTruth(theta=(0.5,))
    specs = [RotationProcessSpec(alpha=a) for a in DEFAULT_ALPHAS[:2]]
    rng = make_rng(6)
    left = rotation_sample(specs[0], 5000, rng=rng)
    right = rotation_sample(specs[1], 5000, rng=rng)
    x = np.concatenate([left, right])
    assert truth.change_indices(x.size) == (5000,)
    gamma = grid_gamma(x, grid_boundaries(x.size, 1, 1), 1)
    assert gamma > 0.5 * empirical_distance(left, right)


def test_single_change_smoke():
    truth = ChangePointTruth(theta=(0.4,))
    hits = 0
    for seed in range(50):
        labeled = block_uniform_sequence(5000, truth, [(0.0, 0.5), (0.5, 1.0)], seed=seed)
        report = estimate_changepoints(labeled.series, 1)
        hits += abs(report.theta_hat[0] - 0.4) < 0.02
    assert hits >= 45


def test_rotation_protocol_error_decreases():
    config = ExperimentConfig(ns=(2000, 5000, 10000), runs=50, out=None)
    rows = ExperimentPipeline(config)(jobs=4, disable_progress=True, save_path=None)
    errors = [stats["mean_total_error"] for _, stats in sorted(summarize(rows).items())]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1.25 * PILOT_ROTATION_ERROR


def test_distance_scales_near_linearly():
    rng = make_rng(0)

    def best_time(n):
        x, y = rng.random(n), rng.random(n)
        p = DistanceParams().resolve(x, y)
        timings = []
        for _ in range(3):
            start = time.perf_counter()
            empirical_distance(x, y, p)
            timings.append(time.perf_counter() - start)
        return min(timings)

    assert best_time(2**17) / best_time(2**16) <= 2.7


def test_change_free_segment_scores_shrink():
    spec = RotationProcessSpec(alpha=DEFAULT_ALPHAS[1])
    p = DistanceParams(m_max=3, l_max=5)
    medians = []
    for n in (2**10, 2**12, 2**14):
        g = grid_boundaries(n, 1, 1)
        peaks = [
            max(score for _, score in segment_scores(rotation_sample(spec, n, rng=make_rng(child_seed(3, n, run))), g, p))
            for run in range(20)
        ]
        medians.append(np.median(peaks))
    assert medians[0] > medians[1] > medians[2]


def test_segment_with_change_scores_highest():
    truth = ChangePointTruth(theta=(0.5,))
    specs = [RotationProcessSpec(alpha=a) for a in DEFAULT_ALPHAS[:2]]
    p = DistanceParams(m_max=3, l_max=5)
    n = 12000
    (change,) = truth.change_indices(n)
    g = grid_boundaries(n, 1, 1)
    hits = 0
    for seed in range(20):
        scores = segment_scores(compose_sequence(n, truth, specs, seed=seed).series, g, p)
        with_change = [score for i, score in scores if g.boundaries[i - 1] < change < g.boundaries[i]]
        without = [score for i, score in scores if not g.boundaries[i - 1] < change < g.boundaries[i]]
        hits += with_change[0] > max(without)
    assert hits >= 18


def test_rotation_segments_share_marginals():
    truth = ChangePointTruth(theta=(0.5,))
    specs = [RotationProcessSpec(alpha=a) for a in (DEFAULT_ALPHAS[0], DEFAULT_ALPHAS[2])]
    labeled = compose_sequence(100000, truth, specs, seed=4)
    left, right = labeled.series[:50000], labeled.series[50000:]
    for l in (1, 2, 3):
        tl, tr = build_frequency_table(left, 1, l), build_frequency_table(right, 1, l)
        for cell in set(tl.counts) | set(tr.counts):
            assert abs(tl.nu(cell) - tr.nu(cell)) < 0.01
    p = DistanceParams(m_max=4, l_max=3)
    assert empirical_distance(left, right, p) > 3 * empirical_distance(left[:25000], left[25000:], p)


def test_two_block_experiment_smoke():
    config = ExperimentConfig(
        ns=(5000,), runs=20, kappa=1, theta=(0.4,), process="blocks", u1=(0.0, 0.5), u2=(0.5, 1.0), out=None
    )
    rows = ExperimentPipeline(config)(disable_progress=True, save_path=None)
    assert summarize(rows)[5000]["mean_total_error"] < 0.02
