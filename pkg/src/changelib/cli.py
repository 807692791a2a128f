"""Command-line front end.

    changelib synth --n 5000 --out series.txt
    changelib detect series.txt --kappa 3 --out report.txt
    changelib distance a.txt b.txt
    changelib experiment --ns 2000,5000,10000 --runs 50 --out results.csv

Exit codes: 0 success, 2 unreadable input or bad usage, 3 invalid or
infeasible configuration, 4 no signal (every grid scored zero).
"""

import argparse
import logging
import sys
from dataclasses import fields, replace
from typing import List, Optional

from .distance.configuration_distance import DistanceParams
from .distance.modeling_distance import empirical_distance
from .errors import InvalidInputError, NoSignalError, SeriesParseError
from .io import SERIES_FORMATS, read_series, write_series, write_truth
from .pipelines.change_detection import ChangePointPipeline
from .pipelines.experiment import PROCESSES, ExperimentConfig, ExperimentPipeline, summarize, synthesize
from .types import rescale_unit

logger = logging.getLogger("changelib")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_NO_SIGNAL = 4


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, but got {text!r}")


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, but got {text!r}")


def _interval(text: str) -> List[float]:
    values = _floats(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH, but got {text!r}")
    return values


def _add_depth_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--m-max", type=int, default=None, help="Gram length depth (default: log2 of the length)")
    parser.add_argument("--l-max", type=int, default=None, help="Resolution depth (default: from the smallest gap)")
    parser.add_argument("--l-cap", type=int, default=None, help="Cap on a derived resolution depth (default: 20)")


def _add_process_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--kappa", type=int, default=None, help="Number of change points (default: 3)")
    parser.add_argument("--lambda-min", type=float, default=None, help="Minimum change point separation (default: 0.1)")
    parser.add_argument("--theta", type=_floats, default=None, help="Fixed change point parameters")
    parser.add_argument("--alphas", type=_floats, default=None, help="Rotation steps, one per segment")
    parser.add_argument("--u1", type=_interval, default=None, help="First uniform interval LOW,HIGH (default: 0,0.7)")
    parser.add_argument("--u2", type=_interval, default=None, help="Second uniform interval LOW,HIGH (default: 0.3,1)")
    parser.add_argument("--process", choices=PROCESSES, default=None, help="Segment generator (default: rotation)")
    parser.add_argument("--seed", type=int, default=None, help="Master random seed (default: 0)")
    parser.add_argument("--config", default=None, help="JSON experiment config; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="changelib", description="Nonparametric multiple change point estimation")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings only and hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Generate a sequence with known change points")
    synth.add_argument("--n", type=int, default=10000, help="Sequence length (default: 10000)")
    _add_process_flags(synth)
    synth.add_argument("--out", required=True, help="Sequence output path")
    synth.add_argument("--truth", default=None, help="Truth CSV output path (default: OUT.truth.csv)")
    synth.add_argument("--format", choices=SERIES_FORMATS, default="text", help="Sequence file format")

    detect = sub.add_parser("detect", help="Estimate change points of a sequence file")
    detect.add_argument("input", help="Sequence file")
    detect.add_argument("--kappa", type=int, required=True, help="Number of change points")
    _add_depth_flags(detect)
    detect.add_argument("--rescale", action="store_true", help="Rescale the series onto [0, 1] first")
    detect.add_argument("--format", choices=SERIES_FORMATS, default="text", help="Sequence file format")
    detect.add_argument("--out", default=None, help="Report output path (default: stdout)")

    distance = sub.add_parser("distance", help="Empirical distance between two sequence files")
    distance.add_argument("first", help="First sequence file")
    distance.add_argument("second", help="Second sequence file")
    _add_depth_flags(distance)
    distance.add_argument("--rescale", action="store_true", help="Rescale both series onto [0, 1] first")
    distance.add_argument("--format", choices=SERIES_FORMATS, default="text", help="Sequence file format")

    experiment = sub.add_parser("experiment", help="Monte Carlo error of the estimator as a function of n")
    experiment.add_argument("--ns", type=_ints, default=None, help="Comma-separated sequence lengths")
    experiment.add_argument("--runs", type=int, default=None, help="Runs per length (default: 50)")
    _add_process_flags(experiment)
    _add_depth_flags(experiment)
    experiment.add_argument("--rescale", action="store_true", help="Rescale each series onto [0, 1] first")
    experiment.add_argument("--jobs", type=int, default=None, help="Worker processes (default: 1)")
    experiment.add_argument("--out", default=None, help="Results CSV path (default: results.csv)")
    return parser


def _distance_params(args: argparse.Namespace) -> DistanceParams:
    depths = {name: getattr(args, name) for name in ("m_max", "l_max", "l_cap")}
    return DistanceParams(**{name: value for name, value in depths.items() if value is not None})


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is None or value is False:
            continue
        overrides[f.name] = value
    if "kappa" in overrides and "alphas" not in overrides and len(config.alphas) != overrides["kappa"] + 1:
        overrides["alphas"] = config.alphas[: overrides["kappa"] + 1]
    return replace(config, **overrides)


def cmd_synth(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    labeled = synthesize(config, args.n, config.seed)
    write_series(args.out, labeled.series, fmt=args.format)
    write_truth(args.truth or f"{args.out}.truth.csv", labeled.truth)
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    pipe = ChangePointPipeline(_distance_params(args), rescale=args.rescale)
    report = pipe(args.input, kappa=args.kappa, fmt=args.format, save_path=args.out)
    if args.out is None:
        sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_distance(args: argparse.Namespace) -> int:
    first = read_series(args.first, fmt=args.format)
    second = read_series(args.second, fmt=args.format)
    if args.rescale:
        first, second = rescale_unit(first), rescale_unit(second)
    params = _distance_params(args).resolve(first, second)
    value = empirical_distance(first, second, params)
    sys.stdout.write(f"distance = {value!r}\nm_max = {params.m_max}\nl_max = {params.l_max}\n")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    rows = ExperimentPipeline(config)(disable_progress=args.quiet)
    for n, stats in summarize(rows).items():
        sys.stdout.write(
            f"n={n} mean_total_error={stats['mean_total_error']!r} runs={stats['runs']} failed={stats['failed']}\n"
        )
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "detect": cmd_detect,
    "distance": cmd_distance,
    "experiment": cmd_experiment,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        return COMMANDS[args.command](args)
    except (SeriesParseError, FileNotFoundError) as e:
        logger.error("%s", e)
        return EXIT_PARSE
    except InvalidInputError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except NoSignalError as e:
        logger.error("no signal: %s", e)
        return EXIT_NO_SIGNAL


if __name__ == "__main__":
    sys.exit(main())
