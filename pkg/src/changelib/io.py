"""Sequence, truth and report files.

Sequences are plain text, one real per line under an optional ``value``
header, or raw little-endian float64 (``fmt="binary"``). Truth files are CSV
with the columns ``k,theta``.
"""

import csv
import logging
import os

import numpy as np

from .changepoint.configuration_changepoint import ChangePointTruth, EstimateReport
from .errors import InvalidInputError, SeriesParseError
from .types import SeriesLike, TimeSeries, as_time_series

logger = logging.getLogger(__name__)

SERIES_FORMATS = ("text", "binary")
SERIES_HEADER = "value"


def _check_format(fmt: str):
    if fmt not in SERIES_FORMATS:
        raise InvalidInputError(f"unknown series format {fmt!r}, choose between {list(SERIES_FORMATS)}")


def _require_file(path: str):
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Expected to find a file at {path} but not found.")


def read_series(path: str, fmt: str = "text") -> TimeSeries:
    _check_format(fmt)
    _require_file(path)
    try:
        if fmt == "binary":
            if os.path.getsize(path) % 8:
                raise ValueError("file size is not a multiple of 8 bytes")
            values = np.fromfile(path, dtype="<f8")
        else:
            with open(path, encoding="utf-8") as fp:
                first = fp.readline().strip()
            skip = 1 if first.lower() == SERIES_HEADER else 0
            values = np.loadtxt(path, dtype=np.float64, skiprows=skip, ndmin=1)
        series = as_time_series(values, "series")
    except ValueError as e:
        raise SeriesParseError(f"cannot read a series from {path}: {e}") from e
    logger.debug("read %d samples from %s", series.size, path)
    return series


def write_series(path: str, x: SeriesLike, fmt: str = "text"):
    _check_format(fmt)
    arr = as_time_series(x)
    if fmt == "binary":
        arr.astype("<f8").tofile(path)
    else:
        np.savetxt(path, arr, fmt="%.17g", header=SERIES_HEADER, comments="")
    logger.info("wrote %d samples to %s", arr.size, path)


def write_truth(path: str, truth: ChangePointTruth):
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["k", "theta"])
        for k, theta in enumerate(truth.theta, start=1):
            writer.writerow([k, repr(theta)])
    logger.info("wrote %d change points to %s", truth.kappa, path)


def read_truth(path: str) -> ChangePointTruth:
    _require_file(path)
    try:
        with open(path, encoding="utf-8", newline="") as fp:
            rows = sorted(csv.DictReader(fp), key=lambda row: int(row["k"]))
        return ChangePointTruth(theta=tuple(float(row["theta"]) for row in rows))
    except (KeyError, TypeError, ValueError) as e:
        raise SeriesParseError(f"cannot read change points from {path}: {e}") from e


def write_report(path: str, report: EstimateReport):
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(report.to_text())
    logger.info("wrote estimate report to %s", path)


def read_report(path: str) -> EstimateReport:
    _require_file(path)
    with open(path, encoding="utf-8") as fp:
        return EstimateReport.from_text(fp.read())
