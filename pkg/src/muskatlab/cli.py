"""Command-line entry point.

Subcommands:

    run          advance a configured simulation, persist its RunLog
    norms        print the norm report of a CSV field (columns x,f) as JSON
    verify       print theorem verdicts for a persisted RunLog as JSON
    convergence  resolution study of the fast flux, persists convergence.json

Exit codes: 0 success, 1 configuration error, 2 numerical halt (blow-up,
self-intersection, degraded parametrization, non-finite flux); the RunLog
is persisted even when the run halts.  MUSKAT_THREADS > 0 caps the BLAS
thread pools (best effort; results are deterministic either way).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

__all__ = ["main"]


def _apply_thread_cap() -> None:
    cap = os.environ.get("MUSKAT_THREADS", "0")
    try:
        n = int(cap)
    except ValueError:
        return
    if n > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(n))


_apply_thread_cap()

import numpy as np  # noqa: E402  (after the thread cap on purpose)

from .config import ConfigError, parse_config, build_initial  # noqa: E402
from .diagnostics import all_verdicts  # noqa: E402
from .norms import report_from_field  # noqa: E402
from .oracle import convergence_study  # noqa: E402
from .runlog import RunLog, STATUS_COMPLETED, load_runlog, save_runlog  # noqa: E402
from .simulate import run_curve, run_graph  # noqa: E402

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _cmd_run(args) -> int:
    config = parse_config(args.config)
    if config.mode not in ("graph", "curve"):
        raise ConfigError(f"run subcommand needs a graph or curve config, got mode {config.mode!r}")
    out_dir = args.output or config.output_dir
    if out_dir is None:
        raise ConfigError("no output directory (set output_dir in the config or pass --output)")
    log = run_graph(config) if config.mode == "graph" else run_curve(config)
    save_runlog(log, out_dir)
    print(f"status: {log.status}")
    if log.turning_time is not None:
        print(f"turning_time: {log.turning_time:.12g}")
    print(f"log: {out_dir}")
    return EXIT_OK if log.status == STATUS_COMPLETED else EXIT_NUMERICAL


def _cmd_norms(args) -> int:
    from .config import _field_from_csv

    field = _field_from_csv(args.csv)
    report = report_from_field(field, 0.0)
    print(json.dumps(report.as_dict(), indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    log = load_runlog(args.log)
    verdicts = [v.as_dict() for v in all_verdicts(log)]
    print(json.dumps(verdicts, indent=2))
    return EXIT_OK


def _cmd_convergence(args) -> int:
    config = parse_config(args.config)
    if config.mode != "convergence":
        raise ConfigError(f"convergence subcommand needs mode = 'convergence', got {config.mode!r}")
    resolutions = [int(r) for r in config.resolutions]
    if len(resolutions) < 3:
        raise ConfigError("convergence mode needs at least three resolutions")
    finest = max(resolutions)
    study_conf = parse_config(args.config)
    study_conf.n_points = finest
    initial = build_initial(study_conf)
    report = convergence_study(initial, resolutions, rho_bar=config.rho_bar, quad=config.quad)
    payload = {
        "resolutions": report.resolutions,
        "errors": report.errors,
        "rate": report.rate,
    }
    out_dir = args.output or config.output_dir
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "convergence.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="muskat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="advance a configured simulation")
    p_run.add_argument("--config", required=True, help="TOML or JSON run configuration")
    p_run.add_argument("--output", default=None, help="override the output directory")
    p_run.set_defaults(func=_cmd_run)

    p_norms = sub.add_parser("norms", help="norm report of a CSV field")
    p_norms.add_argument("--csv", required=True, help="CSV with columns x,f")
    p_norms.set_defaults(func=_cmd_norms)

    p_verify = sub.add_parser("verify", help="theorem verdicts for a RunLog")
    p_verify.add_argument("--log", required=True, help="RunLog directory")
    p_verify.set_defaults(func=_cmd_verify)

    p_conv = sub.add_parser("convergence", help="flux resolution study")
    p_conv.add_argument("--config", required=True, help="config with mode = 'convergence'")
    p_conv.add_argument("--output", default=None, help="directory for convergence.json")
    p_conv.set_defaults(func=_cmd_convergence)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
