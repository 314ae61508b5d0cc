"""
Batch experiments and the acceptance report
===========================================

The same checks are available from config files. This script writes a small
results directory and consolidates it; ``erdsim run`` and ``erdsim report`` do
the same from the shell.
"""
import tempfile
from pathlib import Path

from erdsim.experiments import build_report, load_config, run_experiment, write_result

configs = sorted((Path(__file__).resolve().parent.parent / "configs").glob("*.yaml"))
with tempfile.TemporaryDirectory() as out:
    for path in configs:
        result = run_experiment(load_config(path), jobs=2)
        write_result(result, out)
        print(f"{path.stem:14s} {'PASS' if result.passed else 'FAIL'}  {len(result.rows)} rows")
    rows, ok = build_report(out)
    for r in rows:
        print(f"{r.criterion:>2} {r.status:4s} {r.title}")
    print("overall", "PASS" if ok else "FAIL")
