"""Experiment orchestration and machine-readable output."""

import csv
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np

from .brake import solve_brake, subharmonic_pipeline
from .config import ExperimentConfig, int_list
from .errors import ConfigError
from .flow import CoefficientPath, check_brake_symmetry
from .galerkin import galerkin_dimension_check
from .hamiltonians import audit_conditions, make_builtin
from .iteration import (SystemIndices, random_brake_system, random_positive_system,
                        run_suite)
from .periodic import anchor_system
from .symplectic import LagrangianFrame

CSV_VERSION = 1


def artifact_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunRecord:
    config: dict
    config_hash: str
    seed: int
    version: str
    results: dict
    columns: list
    rows: list
    passed: bool
    timing: dict = field(default_factory=dict)

    def to_dict(self):
        return {"config": self.config, "config_hash": self.config_hash, "seed": self.seed,
                "version": self.version, "csv_version": CSV_VERSION, "passed": self.passed,
                "results": self.results, "timing": self.timing}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def emit_json(record, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(record.to_dict()), indent=2, sort_keys=True) + "\n")
    return path


def emit_csv(record, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["csv_version", *record.columns])
        for row in record.rows:
            w.writerow([CSV_VERSION, *row])
    return path


# -- systems ---------------------------------------------------------------------------

def coefficient_system(system, seed=7):
    """Linear coefficient path named in a config ``[system]`` section."""
    name = str(system.get("name", "random-brake")).lower()
    n = int(system.get("n", 1))
    s = int(system.get("seed", seed))
    if name == "zero":
        return CoefficientPath.scalar(0.0, n)
    if name == "scalar":
        return CoefficientPath.scalar(float(system.get("c", 1.0)), n)
    if name == "anchor":
        return anchor_system(n)
    if name == "random-brake":
        return random_brake_system(s, n)
    if name == "random-positive":
        return random_positive_system(s, n)
    raise ConfigError(f"unknown coefficient system {name!r}")


def hamiltonian_system(system):
    params = {k: v for k, v in system.items() if k != "name"}
    try:
        return make_builtin(system["name"], **params)
    except (KeyError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


# -- kinds ------------------------------------------------------------------------------

def _run_index(cfg):
    B = coefficient_system(cfg.system, cfg.seed)
    steps = int(cfg.numerics["grid"])
    data = SystemIndices(B, int(cfg.numerics["m"]), steps)
    out = {"system": B.description, "n": B.n,
           "L0": list(data.l0.as_tuple()), "L1": list(data.l1.as_tuple())}
    rows = [[B.description, "L0", *data.l0.as_tuple()], [B.description, "L1", *data.l1.as_tuple()]]
    sym = check_brake_symmetry(B, tol=1e-10)
    if sym.two_periodic and sym.brake_symmetric:
        isq = data.sqrt_minus_one
        one = data.omega(1.0)
        out["L0_sqrt(-1)"] = list(isq.as_tuple())
        out["omega_1"] = list(one.as_tuple())
        rows += [[B.description, "L0_sqrt(-1)", *isq.as_tuple()],
                 [B.description, "omega_1(gamma^2)", *one.as_tuple()]]
    return out, ["system", "quantity", "index", "nullity"], rows, True


def _run_iterate(cfg):
    ks = int_list(cfg.numerics["k"])
    reports = run_suite(cfg.seed, int(cfg.numerics["count"]), ks=tuple(ks),
                        m=min(int(cfg.numerics["m"]), 64), steps=int(cfg.numerics["grid"]),
                        strict=False)
    rows = [[r.system_id, r.claim, row["label"], row["relation"], " ".join(row["values"]), row["pass"]]
            for r in reports for row in r.rows]
    passed = all(r.passed for r in reports)
    out = {"reports": [r.to_dict() for r in reports], "count": len(reports),
           "failures": sum(not r.passed for r in reports)}
    return out, ["system", "claim", "row", "relation", "values", "pass"], rows, passed


def _run_galerkin(cfg):
    m = int(cfg.numerics["m"])
    count = int(cfg.numerics["count"])
    steps = int(cfg.numerics["grid"])
    reports, rows = [], []
    for i in range(count):
        n = 1 + i % 2 if "n" not in cfg.system else int(cfg.system["n"])
        B = (coefficient_system({**cfg.system, "seed": cfg.seed * 1000 + i}, cfg.seed)
             if "name" in cfg.system else random_brake_system(cfg.seed * 1000 + i, n))
        for frame in (LagrangianFrame.L0(B.n), LagrangianFrame.L1(B.n)):
            rep = galerkin_dimension_check(B, frame, m, steps=steps)
            d = rep.to_dict()
            d["system"] = B.description
            reports.append(d)
            for mm, c in rep.counts.items():
                rows.append([B.description, frame.label, mm, c.plus, c.zero, c.minus,
                             rep.index_pair[0], rep.index_pair[1], rep.m0, c.match])
    passed = all(r["status"] != "failure" for r in reports)
    cols = ["system", "frame", "m", "plus", "zero", "minus", "index", "nullity", "m0", "match"]
    return {"reports": reports}, cols, rows, passed


def _run_solve(cfg):
    spec = hamiltonian_system(cfg.system)
    j = int_list(cfg.numerics["j"])[0]
    sol = solve_brake(spec, j, int(cfg.numerics["m"]), float(cfg.numerics["K"]),
                      steps=int(cfg.numerics["grid"]))
    cols = ["t"] + [f"z{i + 1}" for i in range(2 * spec.n)]
    passed = bool(sol.window) and max(sol.residuals[k] for k in ("ode", "boundary", "brake_sym")) <= 1e-6
    return {"system": spec.name, "solution": sol.to_dict()}, cols, sol.csv_rows(), passed


def _run_subharmonic(cfg):
    spec = hamiltonian_system(cfg.system)
    rep = subharmonic_pipeline(spec, int_list(cfg.numerics["j"]), int_list(cfg.numerics["k"]),
                               int(cfg.numerics["m"]), float(cfg.numerics["K"]),
                               int(cfg.numerics["grid"]), float(cfg.numerics["tol"]))
    rows = [[r["j"], r["k"], r["kj"], r.get("min_distance"), r.get("distinct"), r["status"]]
            for r in rep.rows]
    return rep.to_dict(), ["j", "k", "kj", "min_distance", "distinct", "status"], rows, rep.passed


def _run_audit(cfg):
    spec = hamiltonian_system(cfg.system)
    verdicts = audit_conditions(spec, int(cfg.numerics["samples"]), seed=cfg.seed)
    rows = [[v.condition, v.verdict, v.worst] for v in verdicts]
    passed = all(v.verdict == "pass" for v in verdicts)
    return ({"system": spec.name, "verdicts": [v.to_dict() for v in verdicts]},
            ["condition", "verdict", "worst"], rows, passed)


_KINDS = {"index": _run_index, "iterate-verify": _run_iterate, "galerkin-check": _run_galerkin,
          "solve": _run_solve, "subharmonic": _run_subharmonic, "audit": _run_audit}


def run(cfg):
    if not isinstance(cfg, ExperimentConfig):
        raise ConfigError("run expects an ExperimentConfig")
    start = time.perf_counter()
    results, columns, rows, passed = _KINDS[cfg.kind](cfg)
    timing = {"wall_time": time.perf_counter() - start,
              "timestamp": datetime.now(timezone.utc).isoformat()}
    return RunRecord(cfg.to_dict(), cfg.digest(), cfg.seed, artifact_version(),
                     _jsonable(results), columns, _jsonable(rows), bool(passed), timing)
