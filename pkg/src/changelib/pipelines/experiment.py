"""Monte Carlo reproduction of the estimation error as a function of ``n``.

Every ``(n, run)`` cell draws its own change points and sequence from the
stream ``SeedSequence(seed, spawn_key=(n, run))``, runs the estimator and
yields one row per change point. Rows are sorted before writing, so the CSV
does not depend on how many worker processes produced it.
"""

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from statistics import mean
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..changepoint.configuration_changepoint import ChangePointTruth
from ..changepoint.modeling_changepoint import error_rate, estimate_changepoints
from ..datagen.configuration_rotation import (
    DEFAULT_ALPHAS,
    DEFAULT_U1,
    DEFAULT_U2,
    LabeledSequence,
    RotationProcessSpec,
)
from ..datagen.modeling_rotation import (
    as_seed_sequence,
    block_uniform_sequence,
    child_seed,
    compose_sequence,
    random_changepoints,
)
from ..distance.configuration_distance import DistanceParams
from ..errors import DegenerateWindowError, InfeasibleConfigError, InvalidInputError, NoSignalError
from ..types import rescale_unit
from .base import Pipeline

logger = logging.getLogger(__name__)

PROCESSES = ("rotation", "blocks")
RESULT_COLUMNS = ("n", "run", "k", "theta_true", "theta_hat", "abs_error", "total_error", "status")


@dataclass
class ExperimentConfig:
    ns: Tuple[int, ...] = (2000, 5000, 10000)
    runs: int = 50
    kappa: int = 3
    lambda_min: float = 0.1
    alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    u1: Tuple[float, float] = DEFAULT_U1
    u2: Tuple[float, float] = DEFAULT_U2
    seed: int = 0
    m_max: Optional[int] = None
    l_max: Optional[int] = None
    l_cap: int = 20
    rescale: bool = False
    process: str = "rotation"
    theta: Optional[Tuple[float, ...]] = None
    jobs: int = 1
    out: str = "results.csv"

    def __post_init__(self):
        self.ns = tuple(int(n) for n in self.ns)
        self.alphas = tuple(float(a) for a in self.alphas)
        self.u1 = tuple(self.u1)
        self.u2 = tuple(self.u2)
        if self.theta is not None:
            self.theta = tuple(float(v) for v in self.theta)

        if not self.ns or min(self.ns) < 2:
            raise InvalidInputError(f"sequence lengths must be at least 2, but got {self.ns}")
        if self.runs < 1:
            raise InvalidInputError(f"runs must be at least 1, but got {self.runs}")
        if self.jobs < 1:
            raise InvalidInputError(f"jobs must be at least 1, but got {self.jobs}")
        if self.process not in PROCESSES:
            raise InvalidInputError(f"unknown process {self.process!r}, choose between {list(PROCESSES)}")
        if self.kappa < 1:
            raise InvalidInputError(f"kappa must be at least 1, but got {self.kappa}")
        if self.theta is None:
            if not self.lambda_min > 0 or (self.kappa + 1) * Fraction(self.lambda_min) > 1:
                raise InfeasibleConfigError(
                    f"{self.kappa} change points at least {self.lambda_min} apart do not fit in (0, 1)"
                )
        elif len(self.theta) != self.kappa:
            raise InvalidInputError(f"kappa={self.kappa} but {len(self.theta)} change points were given")
        if self.process == "rotation" and len(self.alphas) != self.kappa + 1:
            raise InvalidInputError(
                f"kappa={self.kappa} needs {self.kappa + 1} rotation alphas, but got {len(self.alphas)}"
            )
        self.distance_params()

    def distance_params(self) -> DistanceParams:
        return DistanceParams(m_max=self.m_max, l_max=self.l_max, l_cap=self.l_cap)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_file(cls, path: str):
        with open(path, encoding="utf-8") as fp:
            data = json.load(fp)
        return cls(**data)


def synthesize(config: ExperimentConfig, n: int, seed: Any) -> LabeledSequence:
    """Draw change points and a sequence of length ``n`` from one seed."""
    truth_seed, series_seed = as_seed_sequence(seed).spawn(2)
    if config.theta is not None:
        truth = ChangePointTruth(theta=config.theta)
    else:
        truth = random_changepoints(config.kappa, config.lambda_min, truth_seed)

    if config.process == "blocks":
        intervals = [config.u1 if k % 2 == 0 else config.u2 for k in range(truth.kappa + 1)]
        return block_uniform_sequence(n, truth, intervals, series_seed)
    specs = [RotationProcessSpec(alpha=a, u1=config.u1, u2=config.u2) for a in config.alphas]
    return compose_sequence(n, truth, specs, series_seed)


def run_experiment_cell(config: ExperimentConfig, n: int, run: int) -> List[Dict[str, Any]]:
    labeled = synthesize(config, n, child_seed(config.seed, n, run))
    series = rescale_unit(labeled.series) if config.rescale else labeled.series
    truth = labeled.truth
    try:
        report = estimate_changepoints(series, truth.kappa, config.distance_params())
    except (NoSignalError, DegenerateWindowError) as e:
        logger.warning("n=%d run=%d: %s", n, run, e)
        status = "no_signal" if isinstance(e, NoSignalError) else "degenerate_window"
        return [
            dict(n=n, run=run, k=k, theta_true=theta, theta_hat=None, abs_error=None, total_error=None, status=status)
            for k, theta in enumerate(truth.theta, start=1)
        ]
    total = error_rate(report, truth)
    return [
        dict(
            n=n,
            run=run,
            k=k,
            theta_true=theta,
            theta_hat=theta_hat,
            abs_error=abs(theta_hat - theta),
            total_error=total,
            status="ok",
        )
        for k, (theta, theta_hat) in enumerate(zip(truth.theta, report.theta_hat), start=1)
    ]


def _run_cell(args):
    return run_experiment_cell(*args)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(path: str, rows: Sequence[Dict[str, Any]]):
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in RESULT_COLUMNS])
    logger.info("wrote %d result rows to %s", len(rows), path)


def summarize(rows: Sequence[Dict[str, Any]]) -> Dict[int, Dict[str, float]]:
    """Mean total error and failure count per sequence length."""
    summary = {}
    for n in sorted({row["n"] for row in rows}):
        per_run = {row["run"]: row for row in rows if row["n"] == n}
        errors = [row["total_error"] for row in per_run.values() if row["status"] == "ok"]
        summary[n] = {
            "mean_total_error": mean(errors) if errors else math.nan,
            "runs": len(per_run),
            "failed": len(per_run) - len(errors),
        }
    return summary


class ExperimentPipeline(Pipeline):
    """Run every ``(n, run)`` cell of an ``ExperimentConfig`` and collect result rows."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def _sanitize_parameters(self, **kwargs):
        preprocess_kwargs = {}
        forward_kwargs = {
            "jobs": kwargs.get("jobs", self.config.jobs),
            "disable_progress": kwargs.get("disable_progress", False),
        }
        postprocess_kwargs = {
            "save_path": kwargs.get("save_path", self.config.out),
        }
        return preprocess_kwargs, forward_kwargs, postprocess_kwargs

    def preprocess(self, inputs=None):
        config = self.config if inputs is None else replace(self.config, **inputs)
        return {"config": config, "cells": [(config, n, run) for n in config.ns for run in range(config.runs)]}

    def _forward(self, model_inputs: Dict[str, Any], jobs: int, disable_progress: bool):
        cells = model_inputs["cells"]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(tqdm(pool.map(_run_cell, cells), total=len(cells), disable=disable_progress))
        else:
            results = [_run_cell(cell) for cell in tqdm(cells, disable=disable_progress)]
        rows = [row for cell_rows in results for row in cell_rows]
        rows.sort(key=lambda row: (row["n"], row["run"], row["k"]))
        return {"rows": rows}

    def postprocess(self, model_outputs: Dict[str, Any], save_path: Optional[str]):
        rows = model_outputs["rows"]
        if save_path is not None:
            write_results(save_path, rows)
        for n, stats in summarize(rows).items():
            logger.info(
                "n=%d: mean total error %.4f over %d runs (%d failed)",
                n, stats["mean_total_error"], stats["runs"], stats["failed"],
            )
        return rows
