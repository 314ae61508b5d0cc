"""Config-driven verification experiments, result rows and the consolidated report.

A config is a YAML mapping::

    schema_version: 1
    experiment: leak4
    seed: 7
    params:
      tau: {start: 1.0e-3, stop: 1.0e-2, per_decade: 8}
    output: {path: results, format: csv}

Unknown keys anywhere are rejected. Every randomized experiment needs a seed; baths are
drawn from numpy's PCG64 generator, so a fixed config reproduces its output byte for byte.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml

from .decoupling import (average_hamiltonian, collective_target, euler_rotation, euler_target,
                         first_order_average, interleave_weak_gate, run_sequence, seq_block4,
                         seq_full10, seq_leak4, seq_parity_kick, strip_pulses, tau_scan,
                         theta_effective, toggled_frames)
from .dfs import ErrorClass, class_coefficients, class_norms, logical_ops, make_dfs
from .gates import (PhaseGateSpec, restrict_to_pairs, u4, u4_encoded, u_ij, ubar,
                    xy_universality_demo, zbar_rotation)
from .noise import (dephasing_hamiltonian, gaussian_dephase, gaussian_dephase_quadrature,
                    generic_coupling, random_bath, collective_dephasing)
from .offres import LevelSystem, average_step, eliminate_all_leakage, leakage_norm
from .operators import (OperatorSum, PauliString, commutator, dense_of,
                        evolve_reduced, expm, ket, max_dim, op_distance, purity)
from .verification import VerificationReport, geometric_grid

SCHEMA_VERSION = 1
EXPERIMENTS = ("dephase-decay", "dfs-storage", "parity-kick", "block4", "leak4", "full10",
               "weak-gate", "euler", "offres", "tau-scan")
FORMATS = ("csv", "json")
SCAN_SEQUENCES = ("block4", "leak4", "full10", "weak-X", "weak-Y")

CRITERIA = {
    1: "Gaussian dephasing matches quadrature",
    2: "DFS immunity and cross-DFS decoherence",
    3: "Encoded algebra identities",
    4: "Phase dependence of encoded gates",
    5: "Parity kick exactness",
    6: "First-order averaging of the 4- and 10-pulse sequences",
    7: "Second-order residual scaling",
    8: "Mismatched pulses remove the gate",
    9: "Off-resonance leakage elimination",
    10: "Recoupling identities",
    11: "Byte-identical reruns",
}
# check names each data-driven criterion needs before it can pass
REQUIRED = {
    1: ("offdiag_vs_quadrature",),
    2: ("dfs_infidelity", "cross_dfs_purity_drop"),
    5: ("parity_kick_distance",),
    6: ("classes[leak4]", "pulses[leak4]", "classes[full10]", "pulses[full10]"),
    7: ("slope[block4]", "slope[leak4]", "slope[full10]", "slope[weak-X]", "slope[weak-Y]"),
    8: ("negative_control_theta",),
    9: ("leakage_norm", "steps", "degenerate_one_step", "u0_diagonal"),
}
STATIC_CRITERIA = (3, 4, 10)
SLOPE_TARGET, SLOPE_TOL = 2.0, 0.1


class ConfigError(ValueError):
    """Schema or parse problem; ``field`` names the offending key and ``line``/``column`` are 1-based."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None,
                 column: int | None = None):
        self.field, self.line, self.column = field, line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{field}: {message}{where}" if field else f"{message}{where}")


# ---------------------------------------------------------------- parameter schema

def _num(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}", name)
    if not math.isfinite(v):
        raise ConfigError("must be finite", name)
    return float(v)


def _positive(v, name):
    v = _num(v, name)
    if v <= 0:
        raise ConfigError(f"must be positive, got {v}", name)
    return v


def _nonneg(v, name):
    v = _num(v, name)
    if v < 0:
        raise ConfigError(f"must be non-negative, got {v}", name)
    return v


def _posint(v, name):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ConfigError(f"expected a positive integer, got {v!r}", name)
    return v


def _bool(v, name):
    if not isinstance(v, bool):
        raise ConfigError(f"expected true/false, got {v!r}", name)
    return v


def _list_of(check):
    def parse(v, name):
        if not isinstance(v, list) or not v:
            raise ConfigError("expected a non-empty list", name)
        return [check(x, f"{name}[{k}]") for k, x in enumerate(v)]
    return parse


def _grid(v, name):
    """Positive grid: explicit list or ``{start, stop, per_decade}``."""
    if isinstance(v, dict):
        extra = set(v) - {"start", "stop", "per_decade"}
        if extra:
            raise ConfigError(f"unknown grid keys {sorted(extra)}", name)
        if "start" not in v or "stop" not in v:
            raise ConfigError("grid needs start and stop", name)
        start, stop = _positive(v["start"], f"{name}.start"), _positive(v["stop"], f"{name}.stop")
        if stop <= start:
            raise ConfigError("stop must exceed start", name)
        return [float(x) for x in geometric_grid(start, stop, _posint(v.get("per_decade", 8),
                                                                          f"{name}.per_decade"))]
    return _list_of(_positive)(v, name)


def _choice(*options):
    def parse(v, name):
        if v not in options:
            raise ConfigError(f"must be one of {list(options)}, got {v!r}", name)
        return v
    return parse


_SCAN = {"start": 1e-3, "stop": 1e-2, "per_decade": 8}

# name -> {param: (parser, default)}; ``randomized`` experiments need a seed
SCHEMAS: dict[str, dict[str, tuple[Callable, Any]]] = {
    "dephase-decay": {"alphas": (_list_of(_nonneg), [0.1, math.log(2), 1.0, 3.0]),
                      "a": (_num, 1 / math.sqrt(2)), "b": (_num, 1 / math.sqrt(2)),
                      "b_phase": (_num, 0.0), "tolerance": (_positive, 1e-8)},
    "dfs-storage": {"taus": (_list_of(_positive), [0.1, 1.0, 10.0]), "bath_dim": (_posint, 2),
                    "n_baths": (_posint, 3), "tolerance": (_positive, 1e-10),
                    "min_purity_drop": (_positive, 1e-3)},
    "parity-kick": {"taus": (_list_of(_positive), [0.1, 1.0, 10.0]), "bath_dim": (_posint, 2),
                    "commuting": (_bool, False), "tolerance": (_positive, 1e-10)},
    "block4": {"tau": (_grid, _SCAN), "bath_dim": (_posint, 2), "commuting": (_bool, False)},
    "leak4": {"tau": (_grid, _SCAN), "bath_dim": (_posint, 2)},
    "full10": {"tau": (_grid, _SCAN), "bath_dim": (_posint, 2)},
    "weak-gate": {"axis": (_choice("X", "Y"), "X"), "omega": (_positive, 1.0),
                  "t": (_grid, _SCAN), "bath_dim": (_posint, 2)},
    "euler": {"angles": (_list_of(_num), [0.3, -0.5, 0.7]), "omega": (_positive, 1.0),
              "tolerance": (_positive, 1e-6)},
    "offres": {"energies": (_list_of(_num), [0.0, 1.0, 3.7, 5.3]), "coupling": (_positive, 0.1),
               "degenerate_energies": (_list_of(_num), [0.0, 1.0, 4.0, 4.0]),
               "threshold": (_nonneg, 0.0), "tau": (_positive, 1e-2)},
    "tau-scan": {"sequence": (_choice(*SCAN_SEQUENCES), "leak4"), "tau": (_grid, _SCAN),
                 "bath_dim": (_posint, 2), "omega": (_positive, 1.0),
                 "commuting": (_bool, False)},
}
RANDOMIZED = {"dfs-storage", "parity-kick", "block4", "leak4", "full10", "weak-gate", "offres", "tau-scan"}
TOP_KEYS = {"schema_version", "experiment", "seed", "params", "output"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict
    seed: int | None = None
    output_path: str | None = None
    output_format: str = "csv"
    name: str = "experiment"

    def resolved(self) -> dict:
        """Canonical mapping that fully determines the output."""
        return {"schema_version": SCHEMA_VERSION, "experiment": self.experiment, "seed": self.seed,
                "params": self.params, "format": self.output_format}


def _key_marks(node, path=()) -> dict:
    """Map key paths to 1-based (line, column) from a composed YAML node tree."""
    out = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            p = (*path, str(k.value))
            out[p] = (k.start_mark.line + 1, k.start_mark.column + 1)
            out.update(_key_marks(v, p))
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            p = (*path, str(i))
            out[p] = (v.start_mark.line + 1, v.start_mark.column + 1)
            out.update(_key_marks(v, p))
    return out


def _locate(err: ConfigError, marks: dict) -> ConfigError:
    if err.line is not None or not err.field:
        return err
    parts = tuple(err.field.replace("]", "").replace("[", ".").split("."))
    while parts and parts not in marks:
        parts = parts[:-1]
    if parts:
        line, col = marks[parts]
        return ConfigError(str(err).split(": ", 1)[-1], err.field, line, col)
    return err


def parse_config(data: dict, name: str = "experiment", seed_override: int | None = None) -> ExperimentConfig:
    """Validate a decoded config mapping; raises :class:`ConfigError` on the first problem."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    extra = set(data) - TOP_KEYS
    if extra:
        raise ConfigError("unknown key", sorted(extra)[0])
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"must be {SCHEMA_VERSION}, got {data.get('schema_version')!r}", "schema_version")
    exp = data.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r}; choose from {list(EXPERIMENTS)}", "experiment")
    raw = data.get("params") or {}
    if not isinstance(raw, dict):
        raise ConfigError("must be a mapping", "params")
    schema = SCHEMAS[exp]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"unknown parameter for {exp}", f"params.{sorted(unknown)[0]}")
    params = {}
    for key, (parse, default) in schema.items():
        params[key] = parse(raw.get(key, default), f"params.{key}")
    seed = data.get("seed") if seed_override is None else seed_override
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise ConfigError(f"expected a non-negative integer, got {seed!r}", "seed")
    if exp in RANDOMIZED and seed is None:
        raise ConfigError(f"required for the randomized experiment {exp}", "seed")
    out = data.get("output") or {}
    if not isinstance(out, dict) or set(out) - {"path", "format"}:
        raise ConfigError("output takes only 'path' and 'format'", "output")
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"must be one of {list(FORMATS)}", "output.format")
    cfg = ExperimentConfig(exp, params, seed, out.get("path"), fmt, name)
    _semantic_checks(cfg)
    return cfg


def _semantic_checks(cfg: ExperimentConfig) -> None:
    p = cfg.params
    if cfg.experiment == "dephase-decay" and abs(p["a"] ** 2 + p["b"] ** 2 - 1) > 1e-12:
        raise ConfigError("a^2 + b^2 must be 1", "params.a")
    if cfg.experiment == "euler" and len(p["angles"]) != 3:
        raise ConfigError("need exactly three Euler angles", "params.angles")
    if cfg.experiment == "offres":
        for key in ("energies", "degenerate_energies"):
            e = p[key]
            if len(e) < 3:
                raise ConfigError("need at least three levels", f"params.{key}")
            clash = [k for k in range(2, len(e)) if e[k] in (e[0], e[1])]
            if clash or e[0] == e[1]:
                raise ConfigError("qubit level degenerate with another level; no pulse can resolve it",
                                  f"params.{key}")
        ed = p["degenerate_energies"]
        if len(ed) < 4 or ed[2] != ed[3]:
            raise ConfigError("levels 2 and 3 must be degenerate", "params.degenerate_energies")
    dims = {"dfs-storage": 3, "parity-kick": 2, "block4": 4, "leak4": 2, "full10": 2, "weak-gate": 2,
            "tau-scan": 4 if p.get("sequence") == "block4" else 2}
    if cfg.experiment in dims:
        total = 2 ** dims[cfg.experiment] * p["bath_dim"]
        if total > max_dim():
            raise ConfigError(f"total dimension {total} exceeds cap {max_dim()} (ERDSIM_MAX_DIM)",
                              "params.bath_dim")


def load_config(path: str | Path, seed_override: int | None = None) -> ExperimentConfig:
    """Read and validate a YAML config, reporting positions for parse and schema errors."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        msg = getattr(exc, "problem", None) or str(exc)
        if mark is not None:
            raise ConfigError(f"parse error: {msg}", None, mark.line + 1, mark.column + 1) from None
        raise ConfigError(f"parse error: {msg}") from None
    try:
        return parse_config(data, path.stem, seed_override)
    except ConfigError as err:
        raise _locate(err, _key_marks(node) if node is not None else {}) from None


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class ResultRow:
    experiment: str
    index: int
    seed: int | None
    params: tuple
    metric: str
    value: float


@dataclass(frozen=True)
class Check:
    name: str
    criterion: int | None
    value: float
    threshold: float
    mode: str = "<"

    @property
    def passed(self) -> bool:
        if self.mode == "<":
            return self.value < self.threshold
        if self.mode == ">":
            return self.value > self.threshold
        return abs(self.value - SLOPE_TARGET) <= self.threshold  # "slope"

    def to_dict(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "value": self.value,
                "threshold": self.threshold, "mode": self.mode, "passed": self.passed}


@dataclass
class RunResult:
    config: ExperimentConfig
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    report: VerificationReport = field(default_factory=VerificationReport)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, index: int, params: dict, **metrics) -> None:
        ptuple = tuple(params.items())
        for name, value in metrics.items():
            self.rows.append(ResultRow(self.config.experiment, index, self.config.seed, ptuple,
                                       name, float(value)))

    def check(self, name: str, criterion: int | None, value: float, threshold: float,
              mode: str = "<") -> bool:
        c = Check(name, criterion, float(value), float(threshold), mode)
        self.checks.append(c)
        self.report.checks[name] = (c.value, c.threshold, c.passed)
        return c.passed


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "index", "seed", "parameters", "metric", "value"])
    for r in rows:
        params = ";".join(f"{k}={_fmt(v)}" for k, v in r.params)
        w.writerow([r.experiment, r.index, "" if r.seed is None else r.seed, params, r.metric, _fmt(r.value)])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    data = [{"experiment": r.experiment, "index": r.index, "seed": r.seed, "parameters": dict(r.params),
             "metric": r.metric, "value": r.value} for r in rows]
    return json.dumps({"rows": data}, indent=1, sort_keys=False) + "\n"


def _report_dict(rep: VerificationReport) -> dict:
    return {"operator_distance": rep.operator_distance, "dfs_fidelity": rep.dfs_fidelity,
            "leakage_norm": rep.leakage_norm, "scaling_slope": rep.scaling_slope,
            "distances": rep.distances}


def summary_dict(result: RunResult, data_name: str, data_bytes: bytes) -> dict:
    return {"name": result.config.name, "config": result.config.resolved(), "passed": result.passed,
            "checks": [c.to_dict() for c in result.checks], "report": _report_dict(result.report),
            "data": {"file": data_name, "sha256": hashlib.sha256(data_bytes).hexdigest()}}


def render(result: RunResult) -> tuple[bytes, bytes, str]:
    """Data file bytes, summary bytes and the data file name."""
    fmt = result.config.output_format
    data = (rows_to_csv(result.rows) if fmt == "csv" else rows_to_json(result.rows)).encode("utf-8")
    data_name = f"{result.config.name}.{fmt}"
    summary = json.dumps(summary_dict(result, data_name, data), indent=1) + "\n"
    return data, summary.encode("utf-8"), data_name


def write_result(result: RunResult, out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data, summary, data_name = render(result)
    data_path = out_dir / data_name
    summary_path = out_dir / f"{result.config.name}.summary.json"
    data_path.write_bytes(data)
    summary_path.write_bytes(summary)
    return data_path, summary_path


# ---------------------------------------------------------------- experiments

def _exp_dephase_decay(res: RunResult, jobs: int) -> None:
    p = res.config.params
    a, b = complex(p["a"]), p["b"] * np.exp(1j * p["b_phase"])
    worst = 0.0
    for k, alpha in enumerate(p["alphas"]):
        rho = gaussian_dephase(a, b, alpha)
        quad = gaussian_dephase_quadrature(a, b, alpha)
        expected = abs(a * np.conj(b)) * math.exp(-alpha)
        err = float(np.max(np.abs(rho - quad)))
        worst = max(worst, err, abs(abs(rho[0, 1]) - expected))
        res.add(k, {"alpha": alpha}, offdiag_abs=abs(rho[0, 1]), expected=expected, quadrature_error=err)
    res.report.operator_distance = worst
    res.check("offdiag_vs_quadrature", 1, worst, p["tolerance"])


def _exp_dfs_storage(res: RunResult, jobs: int) -> None:
    p = res.config.params
    codes = [("DFS2(0)", make_dfs(2, 0)), ("DFS3(+1)", make_dfs(3, 1)), ("DFS3(-1)", make_dfs(3, -1))]
    worst_eps, best_drop, min_fid = 0.0, 0.0, 1.0
    index = 0
    for k in range(p["n_baths"]):
        seed = res.config.seed + k
        bath = random_bath(p["bath_dim"], seed=seed)
        rng = np.random.Generator(np.random.PCG64(seed))
        for label, code in codes:
            h = collective_dephasing(code.n_qubits, bath)
            amps = rng.standard_normal(code.dim) + 1j * rng.standard_normal(code.dim)
            psi = code.encode(amps / np.linalg.norm(amps))
            rho0 = np.outer(psi, psi.conj())
            for tau in p["taus"]:
                rho = evolve_reduced(expm(h, tau), rho0, bath.initial_state)
                fid = float(np.real(psi.conj() @ rho @ psi))
                eps = max(0.0, 1.0 - fid)
                worst_eps, min_fid = max(worst_eps, eps), min(min_fid, fid)
                res.add(index, {"bath": k, "code": label, "tau": tau}, infidelity=eps)
                index += 1
        # superposition across DFS2(0) and DFS2(2)
        h = collective_dephasing(2, bath)
        psi = (ket("01") + ket("00")) / math.sqrt(2)
        rho0 = np.outer(psi, psi.conj())
        for tau in p["taus"]:
            drop = 1.0 - purity(evolve_reduced(expm(h, tau), rho0, bath.initial_state))
            best_drop = max(best_drop, drop)
            res.add(index, {"bath": k, "code": "DFS2(0)+DFS2(2)", "tau": tau}, purity_drop=drop)
            index += 1
    res.report.dfs_fidelity = min(1.0, max(0.0, min_fid))
    res.check("dfs_infidelity", 2, worst_eps, p["tolerance"])
    res.check("cross_dfs_purity_drop", 2, best_drop, p["min_purity_drop"], ">")


def _exp_parity_kick(res: RunResult, jobs: int) -> None:
    p = res.config.params
    bath = random_bath(p["bath_dim"], seed=res.config.seed, names=("B1", "B2"), commuting=p["commuting"])
    h = dephasing_hamiltonian(2, bath)
    col = (bath["B1"] + bath["B2"]) / 2
    worst, base_min = 0.0, math.inf
    for k, tau in enumerate(p["taus"]):
        seq = seq_parity_kick(tau)
        target = collective_target(col, tau)
        dist = op_distance(run_sequence(seq, h), target)
        base = op_distance(run_sequence(strip_pulses(seq), h), target)
        worst, base_min = max(worst, dist), min(base_min, base)
        res.add(k, {"tau": tau}, distance=dist, baseline=base)
    res.report.operator_distance = worst
    res.report.distances["baseline_min"] = base_min
    res.check("parity_kick_distance", 5, worst, p["tolerance"])
    res.check("baseline_exceeds_residual", None, base_min, worst, ">")


def _scan_setup(sequence: str, p: dict, seed: int):
    """Hamiltonian, sequence builder and name for one residual scan."""
    if sequence == "block4":
        bath = random_bath(p["bath_dim"], seed=seed, names=("B1", "B2", "B3", "B4"),
                           commuting=p.get("commuting", False))
        return dephasing_hamiltonian(4, bath), (lambda t: seq_block4(t))
    h = generic_coupling(2, p["bath_dim"], seed)
    if sequence == "leak4":
        return h, (lambda t: seq_leak4(t))
    if sequence == "full10":
        return h, (lambda t: seq_full10(t))
    axis = sequence[-1]
    omega = p["omega"]
    return h, (lambda t: interleave_weak_gate(axis, omega, t))


def _scan(res: RunResult, sequence: str, taus, jobs: int, exact: bool = False) -> None:
    h, build = _scan_setup(sequence, {**res.config.params, "omega": res.config.params.get("omega", 1.0)},
                           res.config.seed)
    out = tau_scan(build, h, taus, jobs=jobs, fit=not exact)
    for k, (t, r, b) in enumerate(zip(out["tau"], out["residual"], out["baseline"])):
        res.add(k, {"tau": float(t)}, residual=r, baseline=b)
    res.report.operator_distance = float(np.max(out["residual"]))
    res.report.distances["baseline_min"] = float(np.min(out["baseline"]))
    res.check(f"baseline[{sequence}]", None, float(np.min(out["baseline"] - out["residual"])), 0.0, ">")
    if exact:
        res.check(f"exact[{sequence}]", None, res.report.operator_distance, 1e-10)
        return
    res.report.scaling_slope = out["slope"]
    res.add(len(taus), {"tau": "fit"}, slope=out["slope"])
    res.check(f"slope[{sequence}]", 7, out["slope"], SLOPE_TOL, "slope")


def _first_order_checks(res: RunResult, name: str, seq, killed: dict, pulses: int) -> None:
    h = generic_coupling(2, res.config.params["bath_dim"], res.config.seed)
    frames, _, _ = toggled_frames(seq)
    avg = first_order_average(frames, h)
    worst = 0.0
    for k, (label, tag, coeff) in enumerate(class_coefficients(avg)):
        norm = float(np.linalg.norm(coeff))
        res.add(k, {"term": label, "class": tag.value}, averaged_norm=norm)
        if tag in killed.get("classes", ()) or label in killed.get("terms", ()):
            worst = max(worst, norm)
    res.report.leakage_norm = class_norms(avg)[ErrorClass.LEAK]
    res.check(f"classes[{name}]", 6, worst, 1e-12)
    res.check(f"pulses[{name}]", 6, abs(seq.pulse_count - pulses), 0.5)


def _exp_block4(res: RunResult, jobs: int) -> None:
    p = res.config.params
    _scan(res, "block4", p["tau"], jobs, exact=p["commuting"])


def _exp_leak4(res: RunResult, jobs: int) -> None:
    _first_order_checks(res, "leak4", seq_leak4(0.1),
                        {"classes": (ErrorClass.LEAK,), "terms": ("Ybar", "Zbar")}, 4)
    _scan(res, "leak4", res.config.params["tau"], jobs)


def _exp_full10(res: RunResult, jobs: int) -> None:
    _first_order_checks(res, "full10", seq_full10(0.1),
                        {"classes": (ErrorClass.LEAK, ErrorClass.LOGI)}, 10)
    _scan(res, "full10", res.config.params["tau"], jobs)


def _exp_weak_gate(res: RunResult, jobs: int) -> None:
    p = res.config.params
    axis, omega = p["axis"], p["omega"]
    t = p["t"][0]
    clean = OperatorSum.zero(2)
    theta = theta_effective(average_hamiltonian(interleave_weak_gate(axis, omega, t), clean), axis, t)
    res.add(0, {"t": t, "pulses": "matched"}, theta_eff=theta)
    res.check("matched_theta", None, abs(theta - omega * t), 1e-12)
    if axis == "Y":
        wrong = interleave_weak_gate("Y", omega, t, pulses="P", allow_mismatch=True)
        h = generic_coupling(2, p["bath_dim"], res.config.seed)
        theta_bad = theta_effective(average_hamiltonian(wrong, h), "Y", t)
        res.add(1, {"t": t, "pulses": "P"}, theta_eff=theta_bad)
        res.check("negative_control_theta", 8, abs(theta_bad), 1e-10)
    _scan(res, f"weak-{axis}", p["t"], jobs)


def _exp_euler(res: RunResult, jobs: int) -> None:
    p = res.config.params
    alpha, beta, gamma = p["angles"]
    seq = euler_rotation(alpha, beta, gamma, p["omega"])
    code = make_dfs(2, 0)
    # code basis is (|01>, |10>), matching the logical (|0>, |1>)
    block = code.restrict(run_sequence(seq, OperatorSum.zero(2)))
    dist = op_distance(block, euler_target(alpha, beta, gamma))
    res.add(0, {"alpha": alpha, "beta": beta, "gamma": gamma}, distance=dist,
            controls=seq.control_count, pulses=seq.pulse_count)
    res.report.operator_distance = dist
    res.check("euler_distance", None, dist, p["tolerance"])
    res.check("euler_controls", None, seq.control_count, 24.5)


def _exp_offres(res: RunResult, jobs: int) -> None:
    p = res.config.params
    e = p["energies"]
    n = len(e)
    rng = np.random.Generator(np.random.PCG64(res.config.seed))
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h_int = p["coupling"] * (a + a.conj().T) / 2
    system = LevelSystem(e, h_int)
    h_final, schedule = eliminate_all_leakage(system, p["threshold"], tau=p["tau"])
    steps = schedule.meta["steps"]
    for k, (target, t) in enumerate(steps):
        res.add(k, {"target": f"{target[0]}-{target[1]}"}, duration=t)
    diag_change = float(np.max(np.abs(np.diag(h_final) - np.diag(system.hamiltonian))))
    off_diag = max((float(np.max(np.abs(pl.unitary - np.diag(np.diag(pl.unitary)))))
                    for pl in schedule.pulses), default=0.0)
    res.add(len(steps), {"target": "final"}, leakage_norm=leakage_norm(h_final), diag_change=diag_change,
            u0_offdiag=off_diag)
    res.report.leakage_norm = leakage_norm(h_final)
    res.check("leakage_norm", 9, leakage_norm(h_final), max(1e-12, p["threshold"] * 2))
    res.check("steps", 9, len(steps), 2 * (n - 2) + 0.5)
    res.check("diagonal_unchanged", 9, diag_change, 1e-15)
    res.check("u0_diagonal", 9, off_diag, 1e-300)

    ed = p["degenerate_energies"]
    nd = len(ed)
    b = rng.standard_normal((nd, nd)) + 1j * rng.standard_normal((nd, nd))
    dsys = LevelSystem(ed, p["coupling"] * (b + b.conj().T) / 2)
    h1, _ = average_step(dsys.hamiltonian, ed, (0, 2))
    both = max(abs(h1[0, 2]), abs(h1[0, 3]))
    res.add(len(steps) + 1, {"target": "degenerate 0-2"}, residual_02=abs(h1[0, 2]), residual_03=abs(h1[0, 3]))
    res.check("degenerate_one_step", 9, both, 1e-12)


def _exp_tau_scan(res: RunResult, jobs: int) -> None:
    p = res.config.params
    exact = p["sequence"] == "block4" and p["commuting"]
    _scan(res, p["sequence"], p["tau"], jobs, exact=exact)


RUNNERS = {"dephase-decay": _exp_dephase_decay, "dfs-storage": _exp_dfs_storage,
           "parity-kick": _exp_parity_kick, "block4": _exp_block4, "leak4": _exp_leak4,
           "full10": _exp_full10, "weak-gate": _exp_weak_gate, "euler": _exp_euler,
           "offres": _exp_offres, "tau-scan": _exp_tau_scan}


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> RunResult:
    """Execute one experiment; the rows and checks depend only on ``cfg``."""
    res = RunResult(cfg, report=VerificationReport(metadata={"experiment": cfg.experiment,
                                                             "seed": cfg.seed}))
    RUNNERS[cfg.experiment](res, max(1, int(jobs)))
    res.report.validate()
    return res


# ---------------------------------------------------------------- static identities

def static_checks(seed: int = 0) -> list[Check]:
    """Dense algebraic identities that need no configuration."""
    rng = np.random.Generator(np.random.PCG64(seed))
    ops = logical_ops()
    xb, yb, zb = (dense_of(o) for o in (ops.xbar, ops.ybar, ops.zbar))
    code = make_dfs(2, 0)
    zz = PauliString("ZZ").dense()
    out = [
        Check("[Xbar,Ybar]=2iZbar", 3, op_distance(commutator(xb, yb), 2j * zb), 1e-12),
        Check("Xtilde,Ytilde annihilate code", 3,
              max(np.linalg.norm(dense_of(o) @ code.isometry, ord=2) for o in (ops.xtilde, ops.ytilde)), 1e-12),
        Check("exp(+-i pi Xbar)=ZZ", 3, max(op_distance(expm(xb, s * np.pi), zz) for s in (1, -1)), 1e-12),
    ]
    thetas = rng.uniform(-np.pi, np.pi, 10)
    out.append(Check("Zbar rotation from three gates", 3,
                     max(op_distance(zbar_rotation(t).net_pulse(), expm(zb, -t)) for t in thetas), 1e-10))

    worst = 0.0
    for dphi in rng.uniform(-np.pi, np.pi, 10):
        ref = code.restrict(u_ij(PhaseGateSpec(0.7, dphi, 0.0)))
        for big in rng.uniform(-np.pi, np.pi, 10):
            phi_j = (big - dphi) / 2
            blk = code.restrict(u_ij(PhaseGateSpec(0.7, phi_j + dphi, phi_j)))
            worst = max(worst, op_distance(blk, ref))
    out.append(Check("code block depends only on relative phase", 4, worst, 1e-12))
    worst = 0.0
    for phis in rng.uniform(-np.pi, np.pi, (10, 4)):
        worst = max(worst, op_distance(restrict_to_pairs(u4(phis), 2),
                                       u4_encoded(phis[0] - phis[1], phis[2] - phis[3])))
    out.append(Check("U4 restriction", 4, worst, 1e-10))
    worst = max(op_distance(code.restrict(ubar(0.7, d)), code.restrict(u_ij(PhaseGateSpec(0.7, d, 0.0))))
                for d in rng.uniform(-np.pi, np.pi, 10))
    out.append(Check("Ubar matches physical gate on code", 4, worst, 1e-12))

    rep = xy_universality_demo()
    for key in ("C_T01(T12) = i Z0 Z1 T02", "C_T02/2(step1) = Z1(Z2 - Z0)/2"):
        out.append(Check(key, 10, rep.distances[key], 1e-12))
    return out


# ---------------------------------------------------------------- consolidated report

class ReportError(ValueError):
    """No usable results in the report directory."""


@dataclass(frozen=True)
class CriterionRow:
    criterion: int
    title: str
    status: str
    detail: str


def _rerun_matches(summary: dict) -> tuple[bool, str]:
    cfg_d = summary["config"]
    cfg = parse_config({"schema_version": cfg_d["schema_version"], "experiment": cfg_d["experiment"],
                        "seed": cfg_d["seed"], "params": cfg_d["params"],
                        "output": {"format": cfg_d["format"]}}, summary["name"])
    data, _, _ = render(run_experiment(cfg))
    ok = hashlib.sha256(data).hexdigest() == summary["data"]["sha256"]
    return ok, summary["name"]


def build_report(results_dir: str | Path, rerun: bool = True) -> tuple[list[CriterionRow], bool]:
    """One row per acceptance criterion from the summaries in ``results_dir``."""
    results_dir = Path(results_dir)
    if not results_dir.is_dir():
        raise ReportError(f"{results_dir} is not a directory")
    paths = sorted(results_dir.glob("*.summary.json"))
    if not paths:
        raise ReportError(f"no *.summary.json files in {results_dir}")
    summaries = []
    for path in paths:
        try:
            summaries.append(json.loads(path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ReportError(f"unreadable summary {path.name}: {exc}") from None
        data_file = results_dir / summaries[-1]["data"]["file"]
        if not data_file.exists():
            raise ReportError(f"{path.name} refers to missing data file {data_file.name}")
        actual = hashlib.sha256(data_file.read_bytes()).hexdigest()
        if actual != summaries[-1]["data"]["sha256"]:
            raise ReportError(f"{data_file.name} does not match its summary checksum")

    by_crit: dict[int, list] = {c: [] for c in CRITERIA}
    for s in summaries:
        for c in s["checks"]:
            if c["criterion"] is not None:
                by_crit[c["criterion"]].append((s["name"], c))
    static = static_checks()
    rows = []
    for crit, title in CRITERIA.items():
        if crit in STATIC_CRITERIA:
            mine = [c for c in static if c.criterion == crit]
            bad = [c.name for c in mine if not c.passed]
            worst = max(c.value for c in mine)
            rows.append(CriterionRow(crit, title, "FAIL" if bad else "PASS",
                                     f"failed: {', '.join(bad)}" if bad else f"max deviation {worst:.3g}"))
            continue
        if crit == 11:
            if not rerun:
                rows.append(CriterionRow(crit, title, "SKIP", "rerun disabled"))
                continue
            mism = [name for ok, name in map(_rerun_matches, summaries) if not ok]
            rows.append(CriterionRow(crit, title, "FAIL" if mism else "PASS",
                                     f"differs on rerun: {', '.join(mism)}" if mism
                                     else f"{len(summaries)} result files reproduced"))
            continue
        entries = by_crit[crit]
        names = {c["name"] for _, c in entries}
        missing = [n for n in REQUIRED[crit] if n not in names]
        failed = [f"{exp}:{c['name']}={c['value']:.6g}" for exp, c in entries if not c["passed"]]
        if failed:
            rows.append(CriterionRow(crit, title, "FAIL", "; ".join(failed)))
        elif missing:
            rows.append(CriterionRow(crit, title, "FAIL", f"no results for {', '.join(missing)}"))
        else:
            rows.append(CriterionRow(crit, title, "PASS",
                                     ", ".join(sorted({exp for exp, _ in entries}))))
    return rows, all(r.status in ("PASS", "SKIP") for r in rows)
