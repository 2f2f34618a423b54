"""Command-line surface: percolate, label, simulate, simulate-inhom, detect.

Exit codes: 0 success, 2 usage error, 1 runtime/I-O error. Every
subcommand is deterministic given its full flag set including --seed;
--threads only changes the execution schedule, never the output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .clustering import label_components
from .detection import NullDistribution, detect
from .image import (
    BinaryImage,
    ThresholdDirection,
    generate_percolation,
    load_binary,
    load_gray,
    save_binary,
    threshold,
)
from .inhomogeneous import estimate_cdf_inhomogeneous, rect_subgrid
from .lattice import Topology, build_lattice
from .newman_ziff import REFERENCE_PROBABILITIES, sweep
from .rng import RngStream
from .store import load_cdf, save_cdf

_REFERENCE_SIM = {"rows": 55, "cols": 55, "topology": 6, "runs": 1000}
_REFERENCE_INHOM = {
    "rows": 55,
    "cols": 55,
    "topology": 6,
    "runs": 100,
    "p_in": 0.6,
    "p_out": 0.4,
    "subgrid_top": 19,
    "subgrid_left": 19,
    "subgrid_height": 10,
    "subgrid_width": 10,
}


class CliUsageError(ValueError):
    """Bad flag combination detected after parsing; exits with code 2."""


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a probability in [0, 1]")
    return value


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a level in (0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return value


def _prob_list(text: str) -> list[float]:
    return [_probability(part) for part in text.split(",") if part]


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + n for n in missing)
        raise CliUsageError(f"missing required options: {flags}")


def _load_input_image(path: str, tau, direction: str) -> BinaryImage:
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic == b"P1":
        return load_binary(data)
    if magic in (b"P2", b"P5"):
        if tau is None:
            raise CliUsageError("--tau is required for PGM (grey) input")
        return threshold(load_gray(data), tau, ThresholdDirection(direction))
    raise ValueError(f"{path}: unsupported image format (magic {magic!r})")


def _emit(text: str, out_path) -> None:
    if out_path is None:
        print(text)
    else:
        Path(out_path).write_text(text + "\n")


def cmd_percolate(args) -> int:
    image = generate_percolation(args.p, args.rows, args.cols, RngStream(args.seed))
    Path(args.output).write_bytes(save_binary(image))
    return 0


def cmd_label(args) -> int:
    image = _load_input_image(args.input, args.tau, args.direction)
    lattice = build_lattice(image.rows, image.cols, Topology(args.topology))
    labeling = label_components(image, lattice)
    histogram: dict[str, int] = {}
    for size in labeling.cluster_sizes.tolist():
        histogram[str(size)] = histogram.get(str(size), 0) + 1
    report = {
        "num_clusters": labeling.num_clusters,
        "largest": labeling.largest,
        "size_histogram": histogram,
    }
    if args.mask_out is not None and labeling.num_clusters > 0:
        best_label = int(np.argmax(labeling.cluster_sizes)) + 1
        mask = (labeling.labels == best_label).astype(np.uint8)
        Path(args.mask_out).write_bytes(
            save_binary(BinaryImage(image.rows, image.cols, mask))
        )
    _emit(json.dumps(report, indent=2, sort_keys=True), args.output)
    return 0


def cmd_simulate(args) -> int:
    defaults = _REFERENCE_SIM if args.paper_defaults else {}
    rows = args.rows if args.rows is not None else defaults.get("rows")
    cols = args.cols if args.cols is not None else defaults.get("cols")
    topology = args.topology if args.topology is not None else defaults.get("topology")
    runs = args.runs if args.runs is not None else defaults.get("runs")
    if args.p is not None and args.probs is not None:
        raise CliUsageError("--p and --probs are mutually exclusive")
    if args.p is not None:
        probs = [args.p]
    elif args.probs is not None:
        probs = args.probs
    elif args.paper_defaults:
        probs = list(REFERENCE_PROBABILITIES)
    else:
        raise CliUsageError("one of --p, --probs or --paper-defaults is required")
    if rows is None or cols is None or topology is None or runs is None:
        raise CliUsageError(
            "--rows, --cols, --topology and --runs are required without --paper-defaults"
        )

    lattice = build_lattice(rows, cols, Topology(topology))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    estimates = sweep(
        lattice,
        probs,
        runs,
        args.seed,
        threads=args.threads,
        reuse_curves=not args.fresh_ensembles,
    )
    for estimate in estimates:
        path = out_dir / f"cdf_p{estimate.p:g}.csv"
        save_cdf(estimate, path)
        print(f"wrote {path}")
    return 0


def cmd_simulate_inhom(args) -> int:
    defaults = _REFERENCE_INHOM if args.paper_defaults else {}
    values = {}
    for name in _REFERENCE_INHOM:
        given = getattr(args, name)
        values[name] = given if given is not None else defaults.get(name)
    missing = [name for name, v in values.items() if v is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise CliUsageError(f"required without --paper-defaults: {flags}")

    lattice = build_lattice(values["rows"], values["cols"], Topology(values["topology"]))
    try:
        subgrid = rect_subgrid(
            lattice,
            values["subgrid_top"],
            values["subgrid_left"],
            values["subgrid_height"],
            values["subgrid_width"],
        )
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    estimate = estimate_cdf_inhomogeneous(
        lattice,
        subgrid,
        values["p_in"],
        values["p_out"],
        values["runs"],
        args.seed,
        threads=args.threads,
    )
    path = out_dir / f"cdf_inhom_pin{estimate.p_in:g}_pout{estimate.p_out:g}.csv"
    save_cdf(estimate, path)
    print(f"wrote {path}")
    return 0


def cmd_detect(args) -> int:
    null = NullDistribution(load_cdf(args.null))
    lattice = build_lattice(null.cdf.rows, null.cdf.cols, null.cdf.topology)
    image = _load_input_image(args.input, args.tau, args.direction)
    result = detect(image, lattice, null, args.alpha)
    _emit(json.dumps(result.as_dict(), indent=2, sort_keys=True), args.output)
    return 0


def _add_common_sim_flags(parser) -> None:
    parser.add_argument("--rows", type=_positive_int, help="lattice rows")
    parser.add_argument("--cols", type=_positive_int, help="lattice columns")
    parser.add_argument(
        "--topology",
        type=int,
        choices=(4, 6, 8),
        help="neighborhood: 4, 6 (triangular embedding) or 8",
    )
    parser.add_argument("--runs", type=_positive_int, help="number of independent runs")
    parser.add_argument("--seed", type=_nonneg_int, default=0, help="master seed (default 0)")
    parser.add_argument(
        "--threads",
        type=_positive_int,
        default=os.cpu_count() or 1,
        help="worker processes; the output never depends on this (default: machine cores)",
    )
    parser.add_argument("--out-dir", required=True, help="directory for CSV/JSON output")


def _add_threshold_flags(parser) -> None:
    parser.add_argument(
        "--tau", type=_probability, help="threshold in [0, 1]; required for PGM input"
    )
    parser.add_argument(
        "--direction",
        choices=("geq", "lt"),
        default="geq",
        help="geq: a pixel is active when intensity >= tau, so ties count as "
        "active (default); lt: active when intensity < tau",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percodetect",
        description="Object detection in noisy images via percolation cluster sizes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("percolate", help="generate a random site-percolation image")
    p.add_argument("--rows", type=_positive_int, required=True)
    p.add_argument("--cols", type=_positive_int, required=True)
    p.add_argument("--p", type=_probability, required=True, help="occupation probability")
    p.add_argument("--seed", type=_nonneg_int, default=0, help="master seed (default 0)")
    p.add_argument("-o", "--output", required=True, help="PBM output path")
    p.set_defaults(handler=cmd_percolate)

    p = sub.add_parser("label", help="find clusters in a binary or thresholded image")
    p.add_argument("-i", "--input", required=True, help="PBM or PGM input path")
    p.add_argument(
        "--topology", type=int, choices=(4, 6, 8), required=True, help="neighborhood"
    )
    _add_threshold_flags(p)
    p.add_argument("--mask-out", help="optional PBM mask of the largest cluster")
    p.add_argument("-o", "--output", help="JSON report path (default: stdout)")
    p.set_defaults(handler=cmd_label)

    p = sub.add_parser(
        "simulate", help="estimate the null cdf of the maximum cluster size"
    )
    _add_common_sim_flags(p)
    p.add_argument("--p", type=_probability, help="single occupation probability")
    p.add_argument("--probs", type=_prob_list, help="comma-separated probabilities")
    p.add_argument(
        "--paper-defaults",
        action="store_true",
        help="use the built-in reference bundle: 55x55 grid, topology 6, "
        "1000 runs, 17 probabilities from 0.1 to 0.9",
    )
    p.add_argument(
        "--fresh-ensembles",
        action="store_true",
        help="simulate a fresh run ensemble per probability instead of "
        "reusing one ensemble for all (slower, statistically equivalent)",
    )
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser(
        "simulate-inhom",
        help="estimate the cdf with an elevated probability on a subgrid",
    )
    _add_common_sim_flags(p)
    p.add_argument("--p-in", type=_probability, help="occupation probability inside the subgrid")
    p.add_argument("--p-out", type=_probability, help="occupation probability outside")
    p.add_argument(
        "--subgrid-top", type=_nonneg_int, help="0-based row of the subgrid's top edge"
    )
    p.add_argument(
        "--subgrid-left", type=_nonneg_int, help="0-based column of the subgrid's left edge"
    )
    p.add_argument("--subgrid-height", type=_positive_int, help="subgrid rows")
    p.add_argument("--subgrid-width", type=_positive_int, help="subgrid columns")
    p.add_argument(
        "--paper-defaults",
        action="store_true",
        help="use the built-in reference bundle: 55x55 grid, topology 6, "
        "100 runs, 10x10 subgrid at 0-based (19, 19), p_in 0.6, p_out 0.4",
    )
    p.set_defaults(handler=cmd_simulate_inhom)

    p = sub.add_parser("detect", help="test an image against a stored null distribution")
    p.add_argument("-i", "--input", required=True, help="PBM or PGM input path")
    p.add_argument("--null", required=True, help="null distribution CSV (with JSON sidecar)")
    p.add_argument("--alpha", type=_alpha, required=True, help="significance level in (0, 1]")
    _add_threshold_flags(p)
    p.add_argument("-o", "--output", help="JSON result path (default: stdout)")
    p.set_defaults(handler=cmd_detect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliUsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
