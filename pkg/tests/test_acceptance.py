"""Acceptance suite: one PASS/FAIL line per criterion, printed to the terminal.

Chain terms and per-system rows are written as JSON under the directory
named by ``ACCEPTANCE_LOG_DIR`` (a pytest temporary directory otherwise).
"""

import json
import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from brake_index.brake import distinctness, solve_brake, subharmonic_pipeline
from brake_index.flow import CoefficientPath, fundamental_solution, iterate_path
from brake_index.galerkin import find_critical_points, galerkin_dimension_check
from brake_index.hamiltonians import quartic
from brake_index.index import l0_index, l1_index
from brake_index.iteration import (SystemIndices, iteration_chain, random_brake_system,
                                   random_positive_system, verify_bott_even, verify_bott_odd,
                                   verify_index_bounds, verify_period_doubling)
from brake_index.symplectic import LagrangianFrame

SEED = 7
SYSTEMS = 20


@pytest.fixture(scope="module")
def log_dir(tmp_path_factory):
    path = os.environ.get("ACCEPTANCE_LOG_DIR")
    d = Path(path) if path else tmp_path_factory.mktemp("acceptance")
    d.mkdir(parents=True, exist_ok=True)
    return d


@pytest.fixture
def report(capsys, log_dir):
    def emit(number, ok, detail, payload=None):
        line = f"CRITERION {number:>2} {'PASS' if ok else 'FAIL'}: {detail}"
        if payload is not None:
            (log_dir / f"criterion{number}.json").write_text(
                json.dumps(payload, indent=1, default=str))
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def system(i):
    return random_brake_system(SEED * 1000 + i, 1 + i % 2)


@pytest.fixture(scope="module")
def indices():
    return [SystemIndices(system(i)) for i in range(SYSTEMS)]


def test_criterion_01_bott_equalities(indices, report):
    start = time.perf_counter()
    rows, bad = [], []
    for d in indices:
        for k in (3, 5, 4, 6):
            rep = verify_bott_odd(d, k) if k % 2 else verify_bott_even(d, k)
            rows.append(rep.to_dict())
            if not rep.passed:
                bad.append((d.B.description, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    report(1, ok, f"{len(rows)} reports over {SYSTEMS} systems, k in {{3,4,5,6}}, "
                  f"i and nu rows exact, {len(bad)} failures, {elapsed:.0f}s", rows)
    assert ok, bad


def test_criterion_02_period_doubling(indices, report):
    rows = [verify_period_doubling(d) for d in indices]
    bad = [r.system_id for r in rows if not r.passed]
    ok = not bad
    report(2, ok, f"i_1(gamma^2) = i_L0 + i_L1 + n and nu row on {len(rows)} systems "
                  f"(offset(1) pinned on a separate anchor system), {len(bad)} failures",
           [r.to_dict() for r in rows])
    assert ok, bad


def test_criterion_03_iteration_inequalities(indices, report):
    rows, bad = [], []
    for d in indices:
        for k in range(1, 7):
            lower, mid, upper, terms = iteration_chain(d, k)
            good = lower <= mid <= upper
            rows.append({"system": d.B.description, "k": k, "lower": str(lower),
                         "i_L0(gamma^k)": mid, "upper": str(upper), "terms": terms, "pass": good})
            if not good:
                bad.append((d.B.description, k))
    ok = not bad
    report(3, ok, f"{len(rows)} chains (k = 1..6, {SYSTEMS} systems), every term logged, "
                  f"{len(bad)} failures", rows)
    assert ok, bad


def test_criterion_04_index_bounds(indices, report):
    data = list(indices) + [SystemIndices(system(i)) for i in range(SYSTEMS, 50)]
    rows = [verify_index_bounds(d) for d in data]
    bad = [r.system_id for r in rows if not r.passed]
    ok = not bad and len(rows) == 50
    report(4, ok, f"i_L0 <= i_sqrt(-1) <= i_L0 + n and |i_L0 - i_L1| <= n on {len(rows)} systems, "
                  f"{len(bad)} failures", [r.to_dict() for r in rows])
    assert ok, bad


def test_criterion_05_positivity(report):
    rows, bad = [], []
    for i in range(100):
        B = random_positive_system(SEED * 1000 + i, 1 + i % 2)
        a, b = l0_index(B).index, l1_index(B).index
        rows.append({"system": B.description, "i_L0": a, "i_L1": b})
        if a < 0 or b < 0:
            bad.append(B.description)
    ok = not bad
    report(5, ok, f"100 positive-definite systems: min i_L0 = {min(r['i_L0'] for r in rows)}, "
                  f"min i_L1 = {min(r['i_L1'] for r in rows)}, {len(bad)} exceptions", rows)
    assert ok, bad


def test_criterion_06_galerkin_dimensions(report):
    m = 32
    rows, bad, m0s = [], [], []
    for i in range(SYSTEMS):
        B = system(i)
        for frame in (LagrangianFrame.L0(B.n), LagrangianFrame.L1(B.n)):
            rep = galerkin_dimension_check(B, frame, m)
            d = rep.to_dict()
            d["system"] = B.description
            rows.append(d)
            m0s.append(rep.m0)
            counts_ok = all(c.match for c in rep.counts.values())
            if not counts_ok or rep.m0 > m:
                bad.append((B.description, frame.label, rep.status))
    ok = not bad
    report(6, ok, f"three count rows match (i_L, nu_L) at m={m} and {2 * m}, L in {{L0, L1}}, "
                  f"{SYSTEMS} systems; empirical m0 in [{min(m0s)}, {max(m0s)}]; "
                  f"{len(bad)} failures", rows)
    assert ok, bad


def test_criterion_07_iteration_fidelity(report):
    worst, rows = 0.0, []
    steps = 1024
    for i in range(10):
        B = system(i)
        g1 = fundamental_solution(B, 1.0, steps)
        for k in range(1, 7):
            it = iterate_path(g1, k)
            direct = fundamental_solution(B, float(k), k * steps)
            err = float(np.max(np.abs(it.values - direct.values)))
            worst = max(worst, err)
            rows.append({"system": B.description, "k": k, "error": err})
    ok = worst <= 1e-7
    report(7, ok, f"iterate_path vs direct integration, k <= 6, 10 systems: "
                  f"max node error {worst:.2e} (tol 1e-7)", rows)
    assert ok


def _eps_jump_systems():
    out = []
    for n in (1, 2):
        for c in (0.0, math.pi, 2 * math.pi, -math.pi):
            out.append(CoefficientPath.scalar(c, n))
    for i in range(14):
        out.append(system(100 + i))
    for i in range(8):
        out.append(random_positive_system(SEED * 1000 + 200 + i, 1 + i % 2))
    return out


def test_criterion_08_eps_jump(report):
    eps = 1e-3
    rows, bad = [], []
    systems = _eps_jump_systems()
    for B in systems:
        nu = l0_index(B).nullity
        jump = l0_index(B.shifted(eps)).index - l0_index(B.shifted(-eps)).index
        rows.append({"system": B.description, "nu": nu, "jump": jump})
        if jump != nu:
            bad.append(B.description)
    degenerate = sum(r["nu"] > 0 for r in rows)
    ok = not bad and len(systems) == 30
    report(8, ok, f"i(B+eps) - i(B-eps) = nu on {len(systems)} systems "
                  f"({degenerate} degenerate), {len(bad)} failures", rows)
    assert ok, bad


@pytest.fixture(scope="module")
def quartic_j1():
    start = time.perf_counter()
    sol = solve_brake(quartic(), 1, 32)
    return sol, time.perf_counter() - start


def test_criterion_09_existence_witness(quartic_j1, report):
    sol, elapsed = quartic_j1
    start = time.perf_counter()
    fine = find_critical_points(quartic(), m=64, j=1).witness()
    elapsed += time.perf_counter() - start
    p = sol.point
    n, m = 1, 32
    res = sol.residuals
    checks = {
        "nonconstant": sol.amplitude > 1e-4,
        "grad": p.grad_norm <= 1e-8,
        "morse_window": p.morse_index <= m * n + n + 1 <= p.morse_index + p.morse_nullity,
        "index_window": sol.window,
        "residuals": max(res["ode"], res["boundary"], res["brake_sym"]) <= 1e-6,
        "refinement": fine is not None and abs(fine.value - p.value) <= 1e-4,
        "runtime": elapsed < 300,
    }
    ok = all(checks.values())
    payload = {"solution": sol.to_dict(), "m64_value": None if fine is None else fine.value,
               "closed_form_value": math.pi ** 2 / 32, "checks": checks}
    report(9, ok, f"QUARTIC j=1 m=32: c = {p.value:.12f} (closed form {math.pi ** 2 / 32:.12f}), "
                  f"|grad| = {p.grad_norm:.1e}, m- = {p.morse_index}, m0 = {p.morse_nullity}, "
                  f"(i, nu) = {sol.index_pair.as_tuple()}, max residual "
                  f"{max(res['ode'], res['boundary'], res['brake_sym']):.1e}, "
                  f"|c64 - c32| = {abs(fine.value - p.value):.1e}, {elapsed:.0f}s", payload)
    assert ok, checks


def test_criterion_10_subharmonic_distinctness(report):
    family = subharmonic_pipeline(quartic(), (1,), (5,))
    row = family.rows[0]
    sols = family.solutions
    fd = [s.search.fd_check for s in sols.values()]
    fd_ok = all(max(f["gradient"], f["hessian"]) <= 1e-6 and f["points"] == 20 for f in fd)
    rep = distinctness(sols[1], sols[5])
    cert = row["certificate"]
    ok = rep.distinct and rep.min_distance > 1e-4 and fd_ok and family.passed
    report(10, ok, f"QUARTIC z_1 vs z_5: min shift distance {rep.min_distance:.4f} over "
                   f"{len(rep.shift_distances)} shifts; certificate chain lower bound "
                   f"{cert['chain_lower']} (simplified {cert['simplified_lower']}, "
                   f"iterate index {cert['iterate_index']}) vs i_L0(z_5) = {cert['i_L0(z_kj)']}; "
                   f"FD audit max {max(max(f['gradient'], f['hessian']) for f in fd):.1e} "
                   f"at 20 points before each solve", family.to_dict())
    assert ok, row


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
