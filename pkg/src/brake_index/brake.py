"""Brake solutions built from Galerkin critical points: extension to the full
period, linearized index pairs, distinctness of subharmonics and the
family pipeline with its index certificate."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoundaryViolation, ConfigError, SolverFailure, BrakeIndexError
from .flow import CoefficientPath, check_brake_symmetry
from .galerkin import (CriticalPoint, find_critical_points, fourier_derivative,
                       fourier_to_trajectory)
from .index import IndexPair
from .iteration import SystemIndices
from .symplectic import brake_N, standard_J

RESIDUAL_TOL = 1e-6
DISTINCT_TOL = 1e-4


def extend_brake(grid, values, tol=1e-8):
    """Full-period trajectory from a half-period one on ``[0, tau]``.

    ``z~(t) = z(t)`` on [0, tau] and ``N z(2 tau - t)`` on (tau, 2 tau].
    Returns ``(grid, values, closure)`` with ``closure = |z~(2 tau) - z~(0)|``.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    n = values.shape[1] // 2
    scale = max(1.0, float(np.max(np.abs(values))))
    ends = max(float(np.max(np.abs(values[0, :n]))), float(np.max(np.abs(values[-1, :n]))))
    if ends > tol * scale:
        raise BoundaryViolation(f"endpoint leaves L0 by {ends:.3e}")
    tau = grid[-1]
    back = values[::-1][1:] @ brake_N(n)
    full_grid = np.concatenate([grid, 2 * tau - grid[::-1][1:]])
    full = np.concatenate([values, back])
    return full_grid, full, float(np.max(np.abs(full[-1] - full[0])))


@dataclass
class BrakeSolution:
    """A brake solution of multiplier j, in physical time.

    ``half`` and ``full`` are ``(grid, values)`` pairs on ``[0, jT/2]`` and
    ``[0, jT]``.
    """

    spec: object
    j: int
    point: CriticalPoint
    half: tuple
    full: tuple
    residuals: dict
    critical_value: float
    index_pair: IndexPair = None
    window: bool = None

    @property
    def z(self):
        return self.point.z

    def at(self, t):
        """Trajectory at physical times ``t`` (any real t)."""
        return fourier_to_trajectory(self.z, np.asarray(t) * 2.0 / self.spec.period)

    @property
    def amplitude(self):
        """``sup_t |z(t) - z(0)|``; positive for nonconstant solutions."""
        _, vals = self.full
        return float(np.max(np.linalg.norm(vals - vals[0], axis=1)))

    def to_dict(self):
        return {"j": self.j, "critical_value": self.critical_value,
                "residuals": self.residuals, "amplitude": self.amplitude,
                "index": None if self.index_pair is None else self.index_pair.index,
                "nullity": None if self.index_pair is None else self.index_pair.nullity,
                "window": self.window, "point": self.point.to_dict()}

    def csv_rows(self):
        grid, vals = self.full
        return [[float(t), *map(float, v)] for t, v in zip(grid, vals)]


def _residuals(spec, z, samples):
    """ODE, boundary and brake residuals in physical units."""
    spec_n = spec.normalized()
    n = spec.n
    j = z.j
    s = np.linspace(0.0, 2.0 * j, 2 * samples + 1)
    zs = fourier_to_trajectory(z, s)
    dz = fourier_derivative(z, s)
    J = standard_J(n)
    rhs = spec_n.full_grad(s, zs) @ J.T
    rate = 2.0 / spec.period
    ode = rate * float(np.max(np.linalg.norm(dz - rhs, axis=1)))
    boundary = max(float(np.max(np.abs(zs[0, :n]))), float(np.max(np.abs(zs[samples, :n]))))
    mirror = zs[::-1] @ brake_N(n)
    brake = float(np.max(np.linalg.norm(zs - mirror, axis=1)))
    return {"ode": ode, "boundary": boundary, "brake_sym": brake}


def brake_solution(spec, point, samples=None):
    """Package a critical point as a brake solution and measure residuals."""
    z = point.z
    samples = samples or 16 * (2 * z.m + 1)
    s_half = np.linspace(0.0, z.j, samples + 1)
    c = spec.period / 2.0
    half = (s_half * c, fourier_to_trajectory(z, s_half))
    fg, fv, closure = extend_brake(*half)
    res = _residuals(spec, z, samples)
    s_full = fg / c
    res["extension"] = float(np.max(np.linalg.norm(fourier_to_trajectory(z, s_full) - fv, axis=1)))
    res["closure"] = closure
    return BrakeSolution(spec, z.j, point, half, (fg, fv), res, point.value)


def linearized_system(spec, sol):
    """``B(s) = Bhat(s) + Hhat''(s, z(s))`` in normalized time (period 2j)."""
    spec_n = spec.normalized()
    z = sol.z if isinstance(sol, BrakeSolution) else sol

    def evaluate(t):
        return spec_n.full_hessian(t, fourier_to_trajectory(z, t))

    return CoefficientPath(evaluate, spec.n, f"linearized(j={z.j})")


def _unit_system(spec, sol):
    """Linearized system on the clock where the half period is [0, 1]."""
    B = linearized_system(spec, sol).rescaled(float(sol.j))
    check_brake_symmetry(B, samples=64, tol=1e-8)
    return B


def solution_index_pair(spec, sol, steps=1024):
    """``(i_L0, nu_L0)`` of the linearized system on the half period and the
    window verdict ``i <= 1 <= i + nu``."""
    data = SystemIndices(_unit_system(spec, sol), steps=steps)
    pair = data.l0
    return pair, pair.index <= 1 <= pair.index + pair.nullity


def solve_brake(spec, j=1, m=32, K=4.0, seeds=None, steps=1024, samples=None):
    """Lowest-value window-flagged nonconstant brake solution of multiplier j."""
    if j < 1 or j >= spec.max_multiplier():
        raise ConfigError(f"j={j} is outside 1 <= j < {spec.max_multiplier():g}")
    result = find_critical_points(spec, m=m, j=j, seeds=seeds, K=K)
    point = result.witness()
    if point is None:
        raise SolverFailure(f"no window-flagged critical point for j={j}")
    sol = brake_solution(spec, point, samples)
    pair, window = solution_index_pair(spec, sol, steps)
    point.index_pair = pair
    sol.index_pair, sol.window = pair, window
    sol.search = result
    return sol


@dataclass
class DistinctnessReport:
    pair: tuple
    shift_distances: list
    tol: float

    @property
    def min_distance(self):
        return float(min(self.shift_distances))

    @property
    def distinct(self):
        return self.min_distance > self.tol

    def to_dict(self):
        return {"pair": list(self.pair), "shift_distances": self.shift_distances,
                "min_distance": self.min_distance, "distinct": self.distinct, "tol": self.tol}


def distinctness(a, b, tol=DISTINCT_TOL, samples_per_unit=128):
    """Compare ``z_b`` with every half-period shift of ``z_a``.

    With ``b.j = k a.j`` both solutions live on the common period
    ``b.j T``; the shifts ``l T / 2``, ``l = 0 .. 2 b.j - 1``, exhaust the
    time translates of ``z_a`` by multiples of T/2 modulo that period.
    """
    if b.j % a.j:
        raise ConfigError(f"multiplier {b.j} is not a multiple of {a.j}")
    if a.spec.period != b.spec.period:
        raise ConfigError("solutions have different base periods")
    span = 2.0 * b.j
    s = np.linspace(0.0, span, int(samples_per_unit * span) + 1)
    zb = fourier_to_trajectory(b.z, s)
    dists = []
    for l in range(int(span)):
        za = fourier_to_trajectory(a.z, s + l)
        dists.append(float(np.max(np.linalg.norm(zb - za, axis=1))))
    return DistinctnessReport((a.j, b.j), dists, tol)


def certificate(data_a, index_b, k):
    """Every term of the index chain that rules out ``z_kj`` being the
    k-th iterate of ``z_j``.

    ``data_a`` are the index data of ``z_j`` (a :class:`SystemIndices`),
    ``index_b`` the measured pair of ``z_kj``.
    """
    i0, nu0 = data_a.l0.as_tuple()
    i1, nu1 = data_a.l1.as_tuple()
    total = i0 + i1 + nu0 + nu1
    rows = {"i_L0": i0, "nu_L0": nu0, "i_L1": i1, "nu_L1": nu1,
            "i_L0(z_kj)": index_b.index, "nu_L0(z_kj)": index_b.nullity}
    if k % 2:
        c = Fraction(k - 1, 2)
        lower = i0 + c * total
        simple = i0 + c
    else:
        c = Fraction(k, 2) - 1
        isq = data_a.sqrt_minus_one.index
        rows["i_L0_sqrt(-1)"] = isq
        lower = i0 + isq + c * total
        simple = i0 + c
    rows.update({"chain_lower": str(lower), "simplified_lower": str(simple),
                 "iterate_index": data_a.iterate_l0(k).index})
    rows["binds"] = bool(lower > 1)
    rows["guarantee"] = "proved" if k >= 5 else "no guarantee"
    return rows


def subharmonic_pipeline(spec, j_list=(1,), k_list=(5,), m=32, K=4.0, steps=1024,
                         tol=DISTINCT_TOL):
    """Solve for every needed multiplier, then compare each (j, kj) pair."""
    limit = spec.max_multiplier()
    needed = sorted({int(j) for j in j_list} | {int(j * k) for j in j_list for k in k_list})
    bad = [j for j in needed if not 1 <= j < limit]
    if bad:
        raise ConfigError(f"multipliers {bad} violate 1 <= j < {limit:g}")
    solutions, failures = {}, {}
    for j in needed:
        try:
            solutions[j] = solve_brake(spec, j, m, K, steps=steps)
        except BrakeIndexError as exc:
            failures[j] = f"{type(exc).__name__}: {exc}"
    rows = []
    for j in j_list:
        for k in k_list:
            row = {"j": j, "k": k, "kj": j * k}
            if j not in solutions or j * k not in solutions:
                row["status"] = "missing solution"
                rows.append(row)
                continue
            a, b = solutions[j], solutions[j * k]
            rep = distinctness(a, b, tol)
            data = SystemIndices(_unit_system(spec, a), steps=steps)
            row.update(rep.to_dict())
            row["certificate"] = certificate(data, b.index_pair, k)
            row["status"] = "ok" if rep.distinct or k < 5 else "failure"
            rows.append(row)
    return FamilyReport(spec.name, solutions, rows, failures)


@dataclass
class FamilyReport:
    system: str
    solutions: dict
    rows: list
    failures: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures and all(r["status"] == "ok" for r in self.rows)

    def to_dict(self):
        return {"system": self.system,
                "solutions": {str(j): s.to_dict() for j, s in self.solutions.items()},
                "pairs": self.rows, "failures": self.failures, "pass": self.passed}
