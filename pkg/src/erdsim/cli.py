"""Command-line entry point: ``erdsim run|validate|report``.

Exit codes: 0 success, 1 a verification check failed, 2 configuration or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (ConfigError, ReportError, build_report, load_config, run_experiment,
                          write_result)
from .operators import DimensionError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="erdsim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config", type=Path)
    run.add_argument("--output", type=Path, help="output directory (default: config's output.path or ./results)")
    run.add_argument("--format", choices=("csv", "json"), help="override the config's output format")
    run.add_argument("--jobs", type=int, default=1, help="worker threads for grid points")
    run.add_argument("--seed", type=int, help="override the config seed")

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config", type=Path)
    val.add_argument("--seed", type=int, help="seed to assume when the config has none")

    rep = sub.add_parser("report", help="consolidate a results directory against the acceptance thresholds")
    rep.add_argument("dir", type=Path)
    rep.add_argument("--output", type=Path, help="write the report here (default: <dir>/report.<format>)")
    rep.add_argument("--format", choices=("csv", "json"), default="json")
    rep.add_argument("--no-rerun", action="store_true", help="skip the byte-identical rerun check")
    return ap


def _err(msg: str) -> None:
    print(f"erdsim: error: {msg}", file=sys.stderr)


def cmd_run(args) -> int:
    if args.jobs < 1:
        _err("--jobs must be >= 1")
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, seed_override=args.seed)
        if args.format:
            cfg = type(cfg)(**{**cfg.__dict__, "output_format": args.format})
        result = run_experiment(cfg, jobs=args.jobs)
    except (ConfigError, DimensionError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    out_dir = args.output or Path(cfg.output_path or "results")
    data_path, summary_path = write_result(result, out_dir)
    for c in result.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {cfg.name}:{c.name}  value={c.value:.6g}  "
              f"threshold={c.threshold:.6g} ({c.mode})")
    print(f"wrote {data_path} and {summary_path}")
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_validate(args) -> int:
    try:
        load_config(args.config, seed_override=args.seed)
    except (ConfigError, DimensionError) as exc:
        print(f"{args.config}: {exc}")
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        rows, ok = build_report(args.dir, rerun=not args.no_rerun)
    except (ReportError, ConfigError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    out = args.output or args.dir / f"report.{args.format}"
    if args.format == "json":
        doc = {"overall": "PASS" if ok else "FAIL",
               "criteria": [{"criterion": r.criterion, "title": r.title, "status": r.status, "detail": r.detail}
                            for r in rows]}
        out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    else:
        lines = ["criterion,title,status,detail"]
        lines += [f'{r.criterion},"{r.title}",{r.status},"{r.detail}"' for r in rows]
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    for r in rows:
        print(f"{r.criterion:>2}  {r.status:<4}  {r.title}: {r.detail}")
    print(f"overall: {'PASS' if ok else 'FAIL'}  ({out})")
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return {"run": cmd_run, "validate": cmd_validate, "report": cmd_report}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
