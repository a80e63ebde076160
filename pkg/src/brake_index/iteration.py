"""Executable checks of the iteration identities and inequalities for
brake-symmetric linear systems, plus seeded random system generators."""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import VerificationFailure
from .flow import CoefficientPath, fundamental_solution, iterate_path
from .index import IndexPair, l0_index, l1_index
from .periodic import (l0_omega_index_sqrtminus1, omega_index, omega_nullity,
                       root_of_unity)


def _sym(rng, n, scale):
    a = rng.normal(scale=scale, size=(n, n))
    return 0.5 * (a + a.T)


def _n_commuting(rng, n, scale):
    z = np.zeros((n, n))
    return np.block([[_sym(rng, n, scale), z], [z, _sym(rng, n, scale)]])


def _n_anticommuting(rng, n, scale):
    c = rng.normal(scale=scale, size=(n, n))
    z = np.zeros((n, n))
    return np.block([[z, c], [c.T, z]])


def random_brake_system(seed, n, scale=1.0):
    """Random B with ``B(t+2) = B(t)`` and ``B(1+t) N = N B(1-t)``.

    ``cos(p pi t)`` terms carry N-commuting matrices, ``sin(p pi t)`` terms
    N-anticommuting ones, p <= 2.  A random multiple of I spreads the
    indices over several values.
    """
    rng = np.random.default_rng([seed, n])
    shift = rng.uniform(-3.0, 8.0)
    c0 = _n_commuting(rng, n, 1.5 * scale) + shift * np.eye(2 * n)
    cos_terms = [_n_commuting(rng, n, scale), _n_commuting(rng, n, 0.5 * scale)]
    sin_terms = [_n_anticommuting(rng, n, scale), _n_anticommuting(rng, n, 0.5 * scale)]
    B = CoefficientPath.trigonometric(c0, cos_terms, sin_terms,
                                      description=f"brake(seed={seed}, n={n})")
    B.two_periodic = True
    B.brake_symmetric = True
    B.seed = seed
    return B


def random_positive_system(seed, n, margin=0.05, samples=257):
    """Random continuous B(t) on [0, 1], positive definite at every sample."""
    rng = np.random.default_rng([seed, n, 1])
    c0 = _sym(rng, 2 * n, 1.5)
    cos_terms = [_sym(rng, 2 * n, 1.0), _sym(rng, 2 * n, 0.5)]
    sin_terms = [_sym(rng, 2 * n, 1.0)]
    raw = CoefficientPath.trigonometric(c0, cos_terms, sin_terms)
    t = np.linspace(0.0, 1.0, samples)
    lowest = float(np.min(np.linalg.eigvalsh(raw(t))))
    c0 = c0 + (max(0.0, -lowest) + margin + rng.uniform(0.0, 6.0)) * np.eye(2 * n)
    B = CoefficientPath.trigonometric(c0, cos_terms, sin_terms,
                                      description=f"positive(seed={seed}, n={n})")
    B.positive = True
    B.seed = seed
    return B


class SystemIndices:
    """Lazily computed index data of one brake-symmetric system."""

    def __init__(self, B, m=16, steps=1024):
        self.B = B
        self.n = B.n
        self.m = m
        self.steps = steps

    @cached_property
    def gamma1(self):
        return fundamental_solution(self.B, 1.0, self.steps)

    @cached_property
    def gamma2(self):
        return iterate_path(self.gamma1, 2)

    @cached_property
    def l0(self):
        return l0_index(self.B, 1.0, self.steps)

    @cached_property
    def l1(self):
        return l1_index(self.B, 1.0, self.steps)

    @cached_property
    def sqrt_minus_one(self):
        return l0_omega_index_sqrtminus1(self.B, self.steps)

    def iterate_l0(self, k):
        steps = self.steps

        def build(Bp):
            return iterate_path(fundamental_solution(Bp, 1.0, steps), k)

        return l0_index(self.B, float(k), steps, builder=build)

    def omega(self, w):
        """``(i_w(gamma^2), nu_w(gamma^2))``."""
        return IndexPair(omega_index(self.B, w, self.m), omega_nullity(self.gamma2, w),
                         f"omega={w:.6g}")

    def nu_unit_power(self, k):
        """``nu_1(gamma^{2k})``, via ``gamma(2k) = gamma(2)^k``."""
        return omega_nullity(np.linalg.matrix_power(self.gamma2.end, k), 1.0)


@dataclass
class VerificationReport:
    system_id: str
    claim: str
    rows: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r["pass"] for r in self.rows)

    def add(self, label, relation, *values):
        vals = [Fraction(v) for v in values]
        if relation == "==":
            ok = vals[0] == vals[1]
        elif relation == "<=":
            ok = all(a <= b for a, b in zip(vals, vals[1:]))
        else:
            raise ValueError(relation)
        self.rows.append({"label": label, "relation": relation,
                          "values": [str(v) for v in vals], "pass": bool(ok)})
        return ok

    def to_dict(self):
        d = asdict(self)
        d["pass"] = self.passed
        return d

    def require(self):
        if not self.passed:
            raise VerificationFailure(f"{self.claim} failed for {self.system_id}: {self.rows}", self)
        return self


def _data(B, m, steps):
    return B if isinstance(B, SystemIndices) else SystemIndices(B, m, steps)


def _pair(p):
    return {"index": p.index, "nullity": p.nullity}


def verify_bott_odd(B, k, m=16, steps=1024):
    """Odd-k decomposition of ``i_L0(gamma^k)`` into omega-indices of gamma^2."""
    d = _data(B, m, steps)
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be odd and >= 3")
    lhs = d.iterate_l0(k)
    terms = {f"omega_{k}^{2 * i}": d.omega(root_of_unity(k, 2 * i)) for i in range(1, (k - 1) // 2 + 1)}
    rhs_i = d.l0.index + sum(p.index for p in terms.values())
    rhs_nu = d.l0.nullity + sum(p.nullity for p in terms.values())
    rep = VerificationReport(d.B.description, f"bott_odd(k={k})")
    rep.add("i", "==", lhs.index, rhs_i)
    rep.add("nu", "==", lhs.nullity, rhs_nu)
    rep.artifacts = {"i_L0(gamma^k)": _pair(lhs), "i_L0(gamma^1)": _pair(d.l0),
                     **{key: _pair(p) for key, p in terms.items()}}
    return rep


def verify_bott_even(B, k, m=16, steps=1024):
    """Even-k decomposition, with the L0 sqrt(-1) term in the middle."""
    d = _data(B, m, steps)
    if k < 4 or k % 2:
        raise ValueError("k must be even and >= 4")
    lhs = d.iterate_l0(k)
    mid = d.sqrt_minus_one
    terms = {f"omega_{k}^{2 * i}": d.omega(root_of_unity(k, 2 * i)) for i in range(1, k // 2)}
    rhs_i = d.l0.index + mid.index + sum(p.index for p in terms.values())
    rhs_nu = d.l0.nullity + mid.nullity + sum(p.nullity for p in terms.values())
    rep = VerificationReport(d.B.description, f"bott_even(k={k})")
    rep.add("i", "==", lhs.index, rhs_i)
    rep.add("nu", "==", lhs.nullity, rhs_nu)
    rep.artifacts = {"i_L0(gamma^k)": _pair(lhs), "i_L0(gamma^1)": _pair(d.l0),
                     "i_L0_sqrt(-1)(gamma^1)": _pair(mid),
                     **{key: _pair(p) for key, p in terms.items()}}
    return rep


def verify_period_doubling(B, m=16, steps=1024):
    """``i_1(gamma^2) = i_L0 + i_L1 + n`` and ``nu_1(gamma^2) = nu_L0 + nu_L1``."""
    d = _data(B, m, steps)
    one = d.omega(1.0)
    rep = VerificationReport(d.B.description, "period_doubling")
    rep.add("i", "==", one.index, d.l0.index + d.l1.index + d.n)
    rep.add("nu", "==", one.nullity, d.l0.nullity + d.l1.nullity)
    rep.artifacts = {"i_1(gamma^2)": _pair(one), "i_L0": _pair(d.l0), "i_L1": _pair(d.l1)}
    return rep


def iteration_chain(B, k, m=16, steps=1024):
    """Every term of the lower/upper chain for ``i_L0(gamma^k)``."""
    d = _data(B, m, steps)
    n = d.n
    one = d.omega(1.0)
    i1 = Fraction(d.l0.index)
    nu_2k = d.nu_unit_power(k)
    terms = {"i_L0(gamma^1)": d.l0.index, "i_1(gamma^2)": one.index,
             "nu_1(gamma^2)": one.nullity, "nu_1(gamma^2k)": nu_2k,
             "i_L0(gamma^k)": d.iterate_l0(k).index}
    if k % 2:
        c = Fraction(k - 1, 2)
        lower = i1 + c * (one.index + one.nullity - n)
        upper = i1 + c * (one.index + n) - Fraction(nu_2k, 2) + Fraction(one.nullity, 2)
    else:
        c = Fraction(k, 2) - 1
        isq = d.sqrt_minus_one.index
        nu_m1 = d.omega(-1.0).nullity
        terms.update({"i_L0_sqrt(-1)(gamma^1)": isq, "nu_-1(gamma^2)": nu_m1})
        lower = i1 + isq + c * (one.index + one.nullity - n)
        upper = (i1 + isq + c * (one.index + n) - Fraction(nu_2k, 2)
                 + Fraction(one.nullity, 2) + Fraction(nu_m1, 2))
    return lower, terms["i_L0(gamma^k)"], upper, terms


def verify_iteration_inequalities(B, k, m=16, steps=1024):
    d = _data(B, m, steps)
    lower, mid, upper, terms = iteration_chain(d, k)
    rep = VerificationReport(d.B.description, f"iteration_inequalities(k={k})")
    rep.add("chain", "<=", lower, mid, upper)
    rep.artifacts = {key: int(v) for key, v in terms.items()}
    rep.artifacts.update({"lower": str(lower), "upper": str(upper)})
    return rep


def verify_index_bounds(B, m=16, steps=1024):
    """``i_L0 <= i^{L0}_{sqrt(-1)} <= i_L0 + n`` and ``|i_L0 - i_L1| <= n``."""
    d = _data(B, m, steps)
    i0, i1, isq, n = d.l0.index, d.l1.index, d.sqrt_minus_one.index, d.n
    rep = VerificationReport(d.B.description, "index_bounds")
    rep.add("sqrt(-1) window", "<=", i0, isq, i0 + n)
    rep.add("|i_L0 - i_L1| <= n", "<=", abs(i0 - i1), n)
    rep.artifacts = {"i_L0": i0, "i_L1": i1, "i_L0_sqrt(-1)": isq, "n": n}
    return rep


def run_suite(seed=7, count=20, ns=(1, 2), ks=(3, 4, 5, 6), m=16, steps=1024, strict=True):
    """All verifications on ``count`` seeded systems; stops at the first
    failure when ``strict``."""
    reports = []
    for idx in range(count):
        n = ns[idx % len(ns)]
        d = SystemIndices(random_brake_system(seed * 1000 + idx, n), m, steps)
        checks = [verify_period_doubling(d), verify_index_bounds(d)]
        for k in ks:
            if k % 2:
                checks.append(verify_bott_odd(d, k) if k >= 3 else None)
            else:
                checks.append(verify_bott_even(d, k) if k >= 4 else None)
            checks.append(verify_iteration_inequalities(d, k))
        for rep in filter(None, checks):
            reports.append(rep)
            if strict:
                rep.require()
    return reports
