"""Command-line front end.

Subcommands:

* ``sweep``     evaluate a one-variable sweep and write CSV rows,
* ``compass``   run the full array once and write one CSV row per pair,
* ``calibrate`` search drive amplitudes and write a calibration file,
* ``check``     run the randomized invariant suite.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from .errors import ConfigError, SensorModelError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcompass",
        description="Steady-state simulator for the entanglement-based "
                    "microwave magnetometer and compass array.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate a one-variable sweep")
    sweep.add_argument("--config", required=True, help="run configuration (JSON)")
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--threads", type=int, default=1, help="worker threads")

    compass = sub.add_parser("compass", help="run the sensor array once")
    compass.add_argument("--config", required=True, help="run configuration (JSON)")
    compass.add_argument("--out", required=True, help="output CSV path")

    calibrate = sub.add_parser("calibrate", help="search drive amplitudes")
    calibrate.add_argument("--config", default=None,
                           help="optional run configuration with parameter overrides")
    calibrate.add_argument("--out", required=True, help="calibration JSON path")

    check = sub.add_parser("check", help="run the randomized invariant suite")
    check.add_argument("--seed", type=int, default=1234, help="RNG seed")
    check.add_argument("--states", type=int, default=1000,
                       help="random covariance count for the oracle cross-check")
    return parser


def _read_config(path: str):
    from .config import parse_config

    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    return parse_config(text)


def _cmd_sweep(args) -> int:
    from .sweep import run_sweep, write_csv

    config = _read_config(args.config)
    if config.sweep is None:
        print("error: sweep: missing required section", file=sys.stderr)
        return EXIT_CONFIG
    rows = run_sweep(config, threads=max(args.threads, 1))
    try:
        write_csv(rows, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    n_failed = sum(1 for r in rows if r.status not in ("ok", "unstable"))
    print(f"wrote {len(rows)} rows to {args.out} ({n_failed} failed points)")
    return EXIT_OK


def _cmd_compass(args) -> int:
    from .compass import SensorArray, estimate_direction, project_field
    from .config import detuned_params, resolved_params
    from .dynamics import mc_entanglement

    config = _read_config(args.config)
    if config.compass is None:
        print("error: compass: missing required section", file=sys.stderr)
        return EXIT_CONFIG
    spec = config.compass
    params = detuned_params(resolved_params(config), config.detuning_ratio,
                            config.normalization)
    array = SensorArray(pair_count=spec.pair_count, b_ref=spec.b_ref)
    estimate = estimate_direction(array, spec.theta_b, spec.magnitude, params)
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["pair", "angle", "v_h1", "v_h2", "lambda_sph",
                             "entangled", "stable", "status"])
            for k in range(array.pair_count):
                field = project_field(spec.theta_b, spec.magnitude,
                                      array.angle(k), array.b_ref)
                if spec.magnitude == 0.0:
                    writer.writerow([k, format(array.angle(k), ".17g"),
                                     "0", "0", "nan", "false", "false", "no-field"])
                    continue
                result = mc_entanglement(params, field)
                writer.writerow([
                    k,
                    format(array.angle(k), ".17g"),
                    format(field.v_h1, ".17g"),
                    format(field.v_h2, ".17g"),
                    format(result.lambda_sph, ".17g"),
                    "true" if result.entangled else "false",
                    "true" if result.stable else "false",
                    "ok" if result.stable else "unstable",
                ])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if estimate.detected:
        print(f"detected: angle {math.degrees(estimate.angle):.2f} deg, "
              f"pairs {list(estimate.entangled_pairs)}, "
              f"width {math.degrees(estimate.effective_width):.2f} deg")
    else:
        print("no field detected")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    from .calibration import search_calibration, write_calibration
    from .config import resolved_params

    base = None
    if args.config is not None:
        config = _read_config(args.config)
        base = resolved_params(config)
    try:
        calibration = search_calibration(base_params=base)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        write_calibration(calibration, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    for line in calibration.search_log:
        print(line)
    print(f"wrote calibration to {args.out}")
    return EXIT_OK


def _cmd_check(args) -> int:
    from .selfcheck import run_invariant_suite

    report = run_invariant_suite(seed=args.seed, n_states=args.states)
    for line in report.lines:
        print(line)
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "compass": _cmd_compass,
        "calibrate": _cmd_calibrate,
        "check": _cmd_check,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SensorModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
