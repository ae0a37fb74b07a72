"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 runtime error,
4 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import FORMATS, ConfigError, parse_config
from .oracle import build_linear_model, stability_check
from .presets import PRESETS
from .serialize import dumps_series
from .spectra import MismatchSpec
from .sweeps import (SweepError, find_min_power, frequency_sweep,
                     mismatch_sweep, power_sweep)
from .validate import run_validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_VALIDATION = 4

log = logging.getLogger("cqnc_budget")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--output", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=FORMATS, help="output format (default: csv, or config)")
    p.add_argument("--thermal", action="store_true", default=None,
                   help="include the thermal force noise nbar")
    p.add_argument("--preset", choices=PRESETS, help="base parameter set")
    return p


def build_parser() -> argparse.ArgumentParser:
    # argparse usage errors exit with 2, the config-error code
    parser = argparse.ArgumentParser(
        prog="cqnc-budget",
        description="Force-noise budgets for a cavity optomechanical sensor "
                    "with an OPA and a QD-ensemble noise canceller.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    sub.add_parser("spectrum", parents=[common], help="frequency sweep")
    sub.add_parser("power-sweep", parents=[common], help="drive-power sweep at fixed frequency")
    sub.add_parser("mismatch", parents=[common], help="perfect vs mismatched cancellation")
    mp = sub.add_parser("min-power", parents=[common], help="optimal drive power of a channel")
    mp.add_argument("--channel", default="standard", choices=("standard", "added", "full", "oracle"))
    sub.add_parser("validate", parents=[common], help="closed forms against the oracle")
    sub.add_parser("stability", parents=[common], help="eigenvalues of the drift matrix")
    return parser


_AXES = {"spectrum": ("frequency",), "power-sweep": ("power",),
         "mismatch": ("frequency", "mismatch_delta", "mismatch_epsilon")}


def _load(args):
    text = args.config.read_text(encoding="utf-8") if args.config else ""
    default_axis = _AXES.get(args.command, ("frequency",))[0]
    cfg = parse_config(text, preset=args.preset, default_axis=default_axis)
    if args.thermal:
        opts = dataclasses.replace(cfg.options, include_thermal=True)
        cfg = dataclasses.replace(cfg, options=opts,
                                  sweep=dataclasses.replace(cfg.sweep, options=opts))
    return cfg


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _run(args) -> int:
    cfg = _load(args)
    fmt = args.format or cfg.format
    out = args.output or cfg.output
    p = cfg.params
    if p.delta_c != 0:
        log.warning("delta_c is recorded but the model assumes a resonant drive")

    if args.command in ("spectrum", "power-sweep", "mismatch"):
        sweep = cfg.sweep
        wanted = _AXES[args.command]
        if sweep.axis not in wanted:
            raise ConfigError(f"subcommand {args.command!r} cannot run with axis = {sweep.axis}; "
                              f"use one of {', '.join(wanted)}")
        if args.command == "mismatch" and sweep.mismatch is None:
            sweep = dataclasses.replace(sweep, mismatch=MismatchSpec.decay_rate(0.3))
        run = {"spectrum": frequency_sweep, "power-sweep": power_sweep,
               "mismatch": mismatch_sweep}[args.command]
        series = run(sweep)
        for err in series.metadata["errors"]:
            log.warning("point skipped: %s", err)
        _emit(dumps_series(series, fmt), out)
        return EXIT_OK

    if args.command == "min-power":
        res = find_min_power(p, args.channel, eval_omega=cfg.sweep.eval_omega, options=cfg.options)
        doc = {"channel": args.channel, "p_star_W": res.p_star, "s_star": res.s_star,
               "interior": res.interior, "message": res.message}
        _emit(_render(doc, fmt), out)
        return EXIT_OK

    if args.command == "stability":
        rep = stability_check(build_linear_model(p, p.g))
        doc = {"stable": rep.stable, "max_real_eigenvalue": rep.max_real_eigenvalue,
               "indeterminate": rep.indeterminate, "opa_gain_over_kappa": p.opa_gain / p.kappa}
        _emit(_render(doc, fmt), out)
        return EXIT_OK

    report = run_validate(p)
    if fmt == "json":
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", out)
    else:
        _emit(report.format_text() + "\n", out)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    return "".join(f"{k},{v}\n" for k, v in doc.items())


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME if args.config is None or args.config.exists() else EXIT_CONFIG
    except (ArithmeticError, SweepError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
