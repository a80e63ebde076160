"""L0-nullity, the winding-number L0-index and the conjugated L-index.

The L0-index of a nondegenerate path gamma on [0, 1] is read off the
completed path ``beta * gamma~``: a quarter-turn arc from J to I, then
gamma, then a closing path inside ``{det V != 0}`` that ends at M+ or M-.
Along it ``det Q(t) = exp(2i Delta(t))`` with
``Q = (U - iV)(U + iV)^{-1}``; since U and V are real,
``det Q = conj(d) / d`` for ``d = det(U + iV)`` and the continuous branch
is ``Delta = -arg d``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import (DegenerateEndpoint, IntegralDefect, NumericalFailure,
                     PerturbationFailure)
from .flow import SymplecticPath, fundamental_solution
from .symplectic import (LagrangianFrame, blocks, gl_homotopy, lower_factor,
                         middle_factor, standard_J, unipotent_factorization)

RANK_TOL = 1e-8
INTEGER_TOL = 1e-3
EPS_SCHEDULE = (1e-2, 1e-3, 1e-4)
MAX_PHASE_JUMP = np.pi / 4


@dataclass(frozen=True)
class IndexPair:
    index: int
    nullity: int
    boundary: str = "L0"
    perturbation: float = 0.0

    def as_tuple(self):
        return self.index, self.nullity


@dataclass
class UnitaryTrace:
    grid: np.ndarray
    q_values: np.ndarray
    delta: np.ndarray = field(repr=False)

    @property
    def winding(self):
        return (self.delta[-1] - self.delta[0]) / np.pi


def l0_nullity(gamma, rank_tol=RANK_TOL):
    """``n - rank V(1)`` with a relative singular-value cutoff."""
    end = gamma.end if isinstance(gamma, SymplecticPath) else np.asarray(gamma)
    _, V, _, _ = blocks(end)
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[0] == 0.0:
        return V.shape[0]
    # absolute floor keeps V = 0 + roundoff from counting as full rank
    cutoff = rank_tol * max(sv[0], 1.0)
    return int(np.sum(sv <= cutoff))


def _raw_phase(values):
    _, V, _, U = blocks(values)
    return np.angle(np.linalg.det(U + 1j * V))


def _delta(values):
    return -np.unwrap(_raw_phase(values))


def _max_jump(values):
    phase = _raw_phase(values)
    jumps = np.angle(np.exp(1j * np.diff(phase)))
    return float(np.max(np.abs(jumps))) if jumps.size else 0.0


def _refine_nodes(grid, values, max_jump=MAX_PHASE_JUMP, budget=20):
    """Insert geodesic midpoints ``expm(log(M_b M_a^{-1}) / 2) M_a`` until
    no node-to-node phase jump reaches ``max_jump``."""
    grid = list(grid)
    values = list(values)
    for _ in range(budget):
        phase = _raw_phase(np.asarray(values))
        jumps = np.abs(np.angle(np.exp(1j * np.diff(phase))))
        bad = np.nonzero(jumps >= max_jump)[0]
        if bad.size == 0:
            return np.asarray(grid), np.asarray(values)
        for i in bad[::-1]:
            Ma, Mb = values[i], values[i + 1]
            step = linalg.logm(Mb @ np.linalg.inv(Ma))
            if np.max(np.abs(np.imag(step))) > 1e-8:
                raise NumericalFailure("node spacing too coarse to interpolate")
            mid = linalg.expm(0.5 * np.real(step)) @ Ma
            values.insert(i + 1, mid)
            grid.insert(i + 1, 0.5 * (grid[i] + grid[i + 1]))
    raise NumericalFailure("phase refinement budget exhausted")


def _sample_adaptive(f, steps, max_jump=MAX_PHASE_JUMP, max_depth=40):
    """Sample ``f`` on [0, 1], bisecting wherever the phase jumps too far."""
    s = list(np.linspace(0.0, 1.0, int(steps) + 1))
    vals = [f(x) for x in s]
    for _ in range(max_depth):
        phase = _raw_phase(np.asarray(vals))
        jumps = np.abs(np.angle(np.exp(1j * np.diff(phase))))
        bad = np.nonzero(jumps >= max_jump)[0]
        if bad.size == 0:
            return np.asarray(s), np.asarray(vals)
        for i in bad[::-1]:
            mid = 0.5 * (s[i] + s[i + 1])
            s.insert(i + 1, mid)
            vals.insert(i + 1, f(mid))
    raise NumericalFailure("adaptive sampling budget exhausted")


def q_curve(gamma):
    """Unitary trace ``Q(t)`` of a path and its continuous argument."""
    grid, values = _refine_nodes(gamma.grid, gamma.values)
    _, V, _, U = blocks(values)
    Q = (U - 1j * V) @ np.linalg.inv(U + 1j * V)
    return UnitaryTrace(grid, Q, _delta(values))


def arc_values(n, steps=64):
    """``I cos((1-2t) pi/2) + J sin((1-2t) pi/2)`` on t in [0, 1/2]."""
    t = np.linspace(0.0, 0.5, int(steps) + 1)
    ang = (1.0 - 2.0 * t) * np.pi / 2
    J = standard_J(n)
    eye = np.eye(2 * n)
    return t, np.cos(ang)[:, None, None] * eye + np.sin(ang)[:, None, None] * J


def prepend_arc(gamma, arc_steps=64):
    """gamma~ on [0, 1]: the arc from J to I, then ``gamma(2t - 1)``."""
    unit = gamma.rescaled_to_unit()
    t_arc, v_arc = arc_values(gamma.n, arc_steps)
    grid = np.concatenate([t_arc, 0.5 + 0.5 * unit.grid[1:]])
    values = np.concatenate([v_arc, unit.values[1:]])
    return SymplecticPath(grid, values)


def beta_homotopy(endpoint):
    """``s -> Lower((1-s) W) middle(V(s)) Lower((1-s) W')`` with V(s) the
    GL(n) homotopy; its V block is exactly V(s)."""
    W, V, W2 = unipotent_factorization(endpoint)
    v_at = gl_homotopy(V)

    def at(s):
        if s <= 0.0:
            return np.asarray(endpoint, dtype=float).copy()
        return lower_factor((1 - s) * W) @ middle_factor(v_at(s)) @ lower_factor((1 - s) * W2)

    return at


def closing_path_beta(endpoint, steps=64, adaptive=True):
    """Path in ``{det V != 0}`` from ``endpoint`` to M+ (det V > 0) or M- (det V < 0)."""
    at = beta_homotopy(endpoint)
    if adaptive:
        s, vals = _sample_adaptive(at, steps)
    else:
        s = np.linspace(0.0, 1.0, int(steps) + 1)
        vals = np.stack([at(x) for x in s])
    return SymplecticPath(s, vals)


def l0_winding(gamma, beta_steps=64, arc_steps=64):
    """Pre-rounding value ``(Delta(1) - Delta(0)) / pi`` of the completed path."""
    if l0_nullity(gamma) != 0:
        raise DegenerateEndpoint("path is L0-degenerate")
    _, v_arc = arc_values(gamma.n, arc_steps)
    _, v_gamma = _refine_nodes(gamma.grid, gamma.values)
    beta = closing_path_beta(gamma.end, beta_steps)
    values = np.concatenate([v_arc, v_gamma[1:], beta.values[1:]])
    delta = _delta(values)
    return (delta[-1] - delta[0]) / np.pi


def l0_index_nondegenerate(gamma, beta_steps=64, arc_steps=64):
    w = l0_winding(gamma, beta_steps, arc_steps)
    k = int(np.rint(w))
    if abs(w - k) > INTEGER_TOL:
        raise IntegralDefect(f"winding {w:.6f} is not within {INTEGER_TOL} of an integer")
    return k


def _default_builder(interval, steps):
    def build(B):
        return fundamental_solution(B, interval, steps)
    return build


def l0_index(B, interval=1.0, steps=1024, builder=None, schedule=EPS_SCHEDULE):
    """L0 index pair of the fundamental solution of ``y' = J B(t) y``.

    ``builder(B) -> SymplecticPath`` replaces plain integration (used for
    iteration paths).  Degenerate paths take the value of the nearby
    nondegenerate flow of ``B - eps I``, for the first eps of the
    decreasing schedule at which two consecutive values agree.
    """
    build = builder or _default_builder(interval, steps)
    gamma = build(B)
    nu = l0_nullity(gamma)
    if nu == 0:
        return IndexPair(l0_index_nondegenerate(gamma), 0, "L0")
    previous = None
    for eps in schedule:
        perturbed = build(B.shifted(-eps))
        if l0_nullity(perturbed) != 0:
            previous = None
            continue
        value = l0_index_nondegenerate(perturbed)
        if previous is not None and value == previous:
            return IndexPair(value, nu, "L0", eps)
        previous = value
    raise PerturbationFailure(f"no stable perturbed index for {B!r}")


def l_index(B, frame, interval=1.0, steps=1024, builder=None, schedule=EPS_SCHEDULE):
    """L-index pair via ``gamma_c = P^{-1} gamma P``."""
    build = builder or _default_builder(interval, steps)
    P = frame.p

    def conjugated(Bp):
        return build(Bp).conjugated(P)

    pair = l0_index(B, interval, steps, conjugated, schedule)
    return IndexPair(pair.index, pair.nullity, frame.label, pair.perturbation)


def l1_index(B, interval=1.0, steps=1024, builder=None):
    return l_index(B, LagrangianFrame.L1(B.n), interval, steps, builder)
