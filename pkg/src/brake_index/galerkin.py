"""Galerkin discretization of the action functional on the L0-boundary space.

Time is normalized so that the period is 2 and the half-period problem
lives on [0, j].  An element of ``X_m`` is

    z(t) = sum_{|l| <= m} exp((l pi / j) J t) (0; y_l),   y_l in R^n,

i.e. ``x(t) = -sum sin(l pi t / j) y_l`` and ``y(t) = sum cos(l pi t / j) y_l``.
The same formula on [0, 2j] is the brake extension of the half-period
trajectory, so synthesis doubles as the reflection extension.

Coefficients are stored flat with index ``(l + m) * n + i``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import (AllSeedsFailed, ConfigError, CountMismatch, NoConvergence,
                     NumericalFailure)
from .index import l_index
from .symplectic import LagrangianFrame

ZERO_EIG_TOL = 1e-7
GRAD_TOL = 1e-10
TRIVIAL_RADIUS = 1e-2
PANEL_POINTS = 16


# -- coefficient space ----------------------------------------------------------

@dataclass(frozen=True)
class FourierVector:
    """Coefficients ``y_l``, l = -m..m, stored as an array of shape (2m+1, n)."""

    j: int
    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != 2 * self.m + 1:
            raise ValueError(f"coeffs must have shape (2m+1, n), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise NumericalFailure("non-finite Fourier coefficients")
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self):
        return self.coeffs.shape[1]

    @property
    def modes(self):
        return np.arange(-self.m, self.m + 1)

    def flat(self):
        return self.coeffs.reshape(-1).copy()

    @classmethod
    def from_flat(cls, j, m, n, y):
        return cls(j, m, np.asarray(y, dtype=float).reshape(2 * m + 1, n))

    @classmethod
    def zeros(cls, j, m, n):
        return cls(j, m, np.zeros((2 * m + 1, n)))

    def mode(self, l):
        return self.coeffs[l + self.m]

    def norm(self):
        """X-norm: ``j |y_0|^2 + j sum |l| |y_l|^2``."""
        return float(np.sqrt(self.flat() @ gram(self.m, self.j, self.n) @ self.flat()))

    def resized(self, m):
        """Zero-pad or truncate to ``X_m``."""
        out = np.zeros((2 * m + 1, self.n))
        k = min(m, self.m)
        out[m - k:m + k + 1] = self.coeffs[self.m - k:self.m + k + 1]
        return FourierVector(self.j, m, out)


def gram(m, j, n=1):
    """Diagonal Gram matrix of the X inner product in the coefficient basis."""
    l = np.abs(np.arange(-m, m + 1)).astype(float)
    w = j * np.where(l == 0, 1.0, l)
    return np.diag(np.repeat(w, n))


def basis(t, m, j, n=1, derivative=False):
    """Basis trajectories at times ``t``: shape (len(t), 2n, (2m+1) n)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    l = np.arange(-m, m + 1)
    ang = np.outer(t, l) * (np.pi / j)
    s, c = np.sin(ang), np.cos(ang)
    if derivative:
        f = l * (np.pi / j)
        top, bottom = -c * f, -s * f
    else:
        top, bottom = -s, c
    eye = np.eye(n)
    upper = (top[:, None, :, None] * eye[None, :, None, :]).reshape(t.size, n, -1)
    lower = (bottom[:, None, :, None] * eye[None, :, None, :]).reshape(t.size, n, -1)
    return np.concatenate([upper, lower], axis=1)


def fourier_to_trajectory(z, grid):
    """Pointwise synthesis; returns an array of shape (len(grid), 2n)."""
    return basis(grid, z.m, z.j, z.n) @ z.flat()


def fourier_derivative(z, grid):
    return basis(grid, z.m, z.j, z.n, derivative=True) @ z.flat()


def trajectory_to_fourier(path, m, j, n, quad=None):
    """L2 projection of a callable ``t -> (len(t), 2n)`` onto ``X_m``.

    The basis is L2-orthogonal on [0, j] with every squared norm equal to j.
    """
    quad = quad or Quadrature.for_modes(m, j)
    Phi = basis(quad.nodes, m, j, n)
    values = np.asarray(path(quad.nodes), dtype=float)
    y = np.einsum("q,qa,qak->k", quad.weights, values, Phi) / j
    return FourierVector.from_flat(j, m, n, y)


# -- quadrature and operators ------------------------------------------------------

@dataclass(frozen=True)
class Quadrature:
    """Composite Gauss-Legendre rule on [0, j]."""

    j: float
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def composite(cls, j, panels, points=PANEL_POINTS):
        x, w = np.polynomial.legendre.leggauss(points)
        edges = np.linspace(0.0, j, panels + 1)
        h = np.diff(edges)
        nodes = (edges[:-1, None] + 0.5 * h[:, None] * (x[None, :] + 1.0)).reshape(-1)
        weights = (0.5 * h[:, None] * w[None, :]).reshape(-1)
        return cls(float(j), nodes, weights)

    @classmethod
    def for_modes(cls, m, j, extra_panels=4):
        """About one panel per oscillation of the quartic integrands."""
        return cls.composite(j, 2 * m + 2 * int(np.ceil(j)) + extra_panels)

    def check(self, m):
        if self.nodes.size < 4 * m + 4:
            raise ConfigError(f"{self.nodes.size} quadrature nodes are too few for m={m}")
        return self


def assemble_A(m, j, n=1):
    """Matrix of ``<Az, z> = int_0^j (-J z', z) dt``: ``diag(pi l)`` on each
    block, so mode l contributes ``sign(l) (pi / j) ||z_l||_X^2``."""
    if m < 1 or j < 1:
        raise ValueError("need m >= 1 and j >= 1")
    l = np.arange(-m, m + 1)
    return np.diag(np.repeat(np.pi * l.astype(float), n))


def assemble_Bhat(m, j, bhat, quad=None, n=None):
    """``<B u, v> = int_0^j (B(t) u, v) dt`` in the coefficient basis.

    ``bhat=None`` is the zero coefficient (then ``n`` is required).
    """
    if bhat is None:
        size = (2 * m + 1) * (n or 1)
        return np.zeros((size, size))
    quad = (quad or Quadrature.for_modes(m, j)).check(m)
    Phi = basis(quad.nodes, m, j, bhat.n)
    Bq = bhat(quad.nodes)
    Q = np.einsum("q,qak,qab,qbl->kl", quad.weights, Phi, Bq, Phi, optimize=True)
    return 0.5 * (Q + Q.T)


# -- truncation ----------------------------------------------------------------------

def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)


@dataclass(frozen=True)
class TruncationSpec:
    """``Hhat_K = chi(|z|) Hhat + (1 - chi(|z|)) r_K |z|^4``."""

    K: float
    r_K: float
    theta_hat: float

    def chi(self, s):
        return 1.0 - _smoothstep(np.asarray(s) - self.K)

    def chi_d(self, s):
        u = np.clip(np.asarray(s) - self.K, 0.0, 1.0)
        return -30.0 * u * u * (1.0 - u) ** 2

    def chi_dd(self, s):
        u = np.clip(np.asarray(s) - self.K, 0.0, 1.0)
        return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)

    def parts(self, spec, t, z, order=2):
        """Value, gradient and (if ``order == 2``) Hessian of Hhat_K."""
        s = np.linalg.norm(z, axis=1)
        r2 = s * s
        chi = self.chi(s)
        h = spec.value(t, z)
        q = self.r_K * r2 * r2
        d = h - q
        val = q + chi * d
        gq = 4.0 * self.r_K * r2[:, None] * z
        gd = spec.grad(t, z) - gq
        safe = np.where(s > 0, s, 1.0)
        u = z / safe[:, None]
        cd = self.chi_d(s)
        grad = gq + chi[:, None] * gd + (d * cd)[:, None] * u
        if order < 2:
            return val, grad, None
        dim = z.shape[1]
        eye = np.eye(dim)
        outer_zz = z[:, :, None] * z[:, None, :]
        hq = self.r_K * (4.0 * r2[:, None, None] * eye + 8.0 * outer_zz)
        hd = spec.hess(t, z) - hq
        uu = u[:, :, None] * u[:, None, :]
        grad_chi = cd[:, None] * u
        hess_chi = (self.chi_dd(s)[:, None, None] * uu
                    + (cd / safe)[:, None, None] * (eye - uu))
        hess = (hq + chi[:, None, None] * hd
                + grad_chi[:, :, None] * gd[:, None, :]
                + gd[:, :, None] * grad_chi[:, None, :]
                + d[:, None, None] * hess_chi)
        return val, grad, 0.5 * (hess + np.swapaxes(hess, 1, 2))


def _sphere_directions(dim, angular):
    if dim == 2:
        a = np.linspace(0.0, 2 * np.pi, angular, endpoint=False)
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if dim == 4:
        k = max(int(round(np.sqrt(angular))), 4)
        eta = np.linspace(0.0, np.pi / 2, k)
        phi = np.linspace(0.0, 2 * np.pi, k, endpoint=False)
        e, p1, p2 = np.meshgrid(eta, phi, phi, indexing="ij")
        c, s = np.cos(e).ravel(), np.sin(e).ravel()
        return np.stack([c * np.cos(p1.ravel()), s * np.cos(p2.ravel()),
                         c * np.sin(p1.ravel()), s * np.sin(p2.ravel())], axis=1)
    g = np.random.default_rng(0).normal(size=(angular * dim, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def truncate_hamiltonian(spec, K, radial=64, angular=256, times=33):
    """``r_K`` as the largest sampled ``Hhat / |z|^4`` over the shell
    ``K <= |z| <= K + 1`` and one period of time."""
    if K <= 0:
        raise ValueError("K must be positive")
    dirs = _sphere_directions(2 * spec.n, angular)
    radii = np.linspace(K, K + 1.0, radial)
    ts = np.linspace(0.0, spec.period, times)
    best = 0.0
    for t in ts:
        z = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, 2 * spec.n)
        tt = np.full(z.shape[0], t)
        ratio = spec.value(tt, z) / np.sum(z * z, axis=1) ** 2
        if not np.all(np.isfinite(ratio)):
            raise NumericalFailure("non-finite Hamiltonian values on the truncation shell")
        best = max(best, float(np.max(ratio)))
    return TruncationSpec(float(K), best, spec.theta_hat)


# -- the functional -----------------------------------------------------------------

class Functional:
    """``phi(z) = <(A - Bhat) z, z> / 2 - int_0^j Hhat_K(t, z(t)) dt`` on X_m,
    for a spec already in normalized time."""

    def __init__(self, spec, trunc, m, j, quad=None):
        if spec.period != 2.0:
            raise ConfigError("the functional expects a spec normalized to period 2")
        self.spec = spec
        self.trunc = trunc
        self.m = int(m)
        self.j = int(j)
        self.n = spec.n
        self.quad = (quad or Quadrature.for_modes(self.m, self.j)).check(self.m)
        self.Phi = basis(self.quad.nodes, self.m, self.j, self.n)
        self.A = assemble_A(self.m, self.j, self.n)
        self.B = assemble_Bhat(self.m, self.j, spec.bhat, self.quad, self.n)
        self.L = self.A - self.B
        self.G = gram(self.m, self.j, self.n)

    @property
    def dim(self):
        return self.L.shape[0]

    def _flat(self, z):
        return z.flat() if isinstance(z, FourierVector) else np.asarray(z, dtype=float)

    def _parts(self, y, order):
        Z = self.Phi @ y
        out = self.trunc.parts(self.spec, self.quad.nodes, Z, order)
        for part in out:
            if part is not None and not np.all(np.isfinite(part)):
                raise NumericalFailure("non-finite Hamiltonian evaluation")
        return out

    def value(self, z):
        y = self._flat(z)
        h, _, _ = self._parts(y, 1)
        return float(0.5 * y @ self.L @ y - self.quad.weights @ h)

    def gradient(self, z):
        y = self._flat(z)
        _, g, _ = self._parts(y, 1)
        return self.L @ y - np.einsum("q,qak,qa->k", self.quad.weights, self.Phi, g)

    def hessian(self, z):
        y = self._flat(z)
        _, _, h = self._parts(y, 2)
        W = self.quad.weights[:, None, None] * h
        K = np.einsum("qak,qab,qbl->kl", self.Phi, W, self.Phi, optimize=True)
        H = self.L - K
        return 0.5 * (H + H.T)

    def vector(self, y):
        return FourierVector.from_flat(self.j, self.m, self.n, y)


def evaluate_phi(z, spec, trunc, quad=None):
    return Functional(spec, trunc, z.m, z.j, quad).value(z)


def gradient_phi(z, spec, trunc, quad=None):
    F = Functional(spec, trunc, z.m, z.j, quad)
    return F.vector(F.gradient(z))


def hessian_phi(z, spec, trunc, quad=None):
    return Functional(spec, trunc, z.m, z.j, quad).hessian(z)


def gradient_check(F, points=20, seed=0, h=1e-5, scale=0.5):
    """Largest relative central-difference errors of gradient and Hessian
    along random directions at random points."""
    rng = np.random.default_rng(seed)
    worst_g = worst_h = 0.0
    for _ in range(points):
        y = rng.normal(size=F.dim)
        y *= scale / np.sqrt(y @ F.G @ y)
        d = rng.normal(size=F.dim)
        d /= np.linalg.norm(d)
        fd = (F.value(y + h * d) - F.value(y - h * d)) / (2 * h)
        exact = F.gradient(y) @ d
        worst_g = max(worst_g, abs(fd - exact) / max(abs(exact), 1e-8))
        fdh = (F.gradient(y + h * d) - F.gradient(y - h * d)) / (2 * h)
        hd = F.hessian(y) @ d
        worst_h = max(worst_h, np.linalg.norm(fdh - hd) / max(np.linalg.norm(hd), 1e-8))
    return {"gradient": float(worst_g), "hessian": float(worst_h), "points": points}


# -- critical points -------------------------------------------------------------------

@dataclass
class CriticalPoint:
    z: FourierVector
    value: float
    grad_norm: float
    morse_index: int
    morse_nullity: int
    window: bool
    linf: float
    seed: int = -1
    iterations: int = 0
    index_pair: object = None

    def to_dict(self):
        return {"value": self.value, "grad_norm": self.grad_norm,
                "morse_index": self.morse_index, "morse_nullity": self.morse_nullity,
                "window": self.window, "linf": self.linf, "seed": self.seed,
                "iterations": self.iterations, "m": self.z.m, "j": self.z.j,
                "index_pair": None if self.index_pair is None else list(self.index_pair.as_tuple())}


@dataclass
class SearchResult:
    points: list
    failures: dict = field(default_factory=dict)
    trivial: int = 0
    K: float = 0.0
    fd_check: dict = field(default_factory=dict)

    def witness(self):
        """Lowest-value window-flagged point, or None."""
        flagged = [p for p in self.points if p.window and p.value > 0]
        return min(flagged, key=lambda p: p.value) if flagged else None


def generate_seeds(m, j, n, count=8, rho=0.1, r1=1.0, seed=0, top_mode=3):
    """Scaled X_m^+ unit vectors on the lowest modes plus random low-mode
    combinations; every seed has X-norm between rho and r1."""
    G = gram(m, j, n)
    out = []
    for l in range(1, min(top_mode, m) + 1):
        for i in range(n):
            e = np.zeros((2 * m + 1, n))
            e[m + l, i] = 1.0
            e = e.reshape(-1)
            e /= np.sqrt(e @ G @ e)
            out.extend(r * e for r in np.linspace(rho, r1, 4))
    rng = np.random.default_rng([seed, m, j, n])
    low = min(top_mode, m)
    for _ in range(count):
        c = np.zeros((2 * m + 1, n))
        c[m - low:m + low + 1] = rng.normal(size=(2 * low + 1, n))
        c = c.reshape(-1)
        c *= rng.uniform(rho, r1) / np.sqrt(c @ G @ c)
        out.append(c)
    return out


def _deflation(y, roots, power=2.0, shift=1.0):
    """``M(y) = prod (|y - r|^-p + shift)`` and ``grad log M``."""
    M = 1.0
    dlog = np.zeros_like(y)
    for r in roots:
        d = y - r
        dist = max(float(np.linalg.norm(d)), 1e-300)
        a = dist ** -power
        M *= a + shift
        dlog += (-power * dist ** (-power - 2) * d) / (a + shift)
    return M, dlog


def _newton_direction(H, g):
    try:
        return np.linalg.solve(H, -g)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(H, -g, rcond=None)[0]


class _Trivial(Exception):
    pass


def newton(F, y0, roots=(), max_iter=60, tol=GRAD_TOL, max_step=1.0,
           trivial_radius=TRIVIAL_RADIUS, patience=12):
    """Damped Newton on ``grad phi``; with ``roots`` the residual is deflated
    by ``M(y)`` and the step rescaled by ``1 / (1 - grad log M . delta)``.

    Iterates entering the ball of X-radius ``trivial_radius`` are abandoned:
    the origin is a degenerate critical point that Newton only approaches
    linearly.
    """
    y = np.array(y0, dtype=float)
    g = F.gradient(y)
    best, stale = np.inf, 0
    for it in range(max_iter):
        gn = float(np.linalg.norm(g))
        if np.sqrt(y @ F.G @ y) < trivial_radius:
            raise _Trivial()
        if gn <= tol:
            return y, gn, it
        if gn < 0.5 * best:
            best, stale = gn, 0
        else:
            stale += 1
            if stale > patience:
                break
        delta = _newton_direction(F.hessian(y), g)
        M, dlog = _deflation(y, roots)
        denom = 1.0 - float(dlog @ delta)
        step = delta / denom if abs(denom) > 1e-12 else delta
        cap = max_step * (1.0 + np.linalg.norm(y))
        sn = np.linalg.norm(step)
        if sn > cap:
            step *= cap / sn
        merit = M * gn
        alpha = 1.0
        for _ in range(12):
            trial = y + alpha * step
            gt = F.gradient(trial)
            Mt, _ = _deflation(trial, roots)
            if Mt * np.linalg.norm(gt) < merit or alpha < 1e-3:
                break
            alpha *= 0.5
        y, g = trial, gt
        if not np.all(np.isfinite(y)):
            break
    raise NoConvergence(f"Newton stopped at |grad| = {np.linalg.norm(g):.3e}")


def morse_data(F, y, rel_tol=ZERO_EIG_TOL):
    """``(m^-, m^0)`` from the Hessian eigenvalues in the X metric."""
    ev = linalg.eigh(F.hessian(y), F.G, eigvals_only=True)
    cut = rel_tol * max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev < -cut)), int(np.sum(np.abs(ev) <= cut))


def sup_norm(z, samples=None):
    """``max_t |z(t)|`` on a dense grid of [0, j]."""
    samples = samples or 8 * (2 * z.m + 1)
    t = np.linspace(0.0, z.j, samples)
    return float(np.max(np.linalg.norm(fourier_to_trajectory(z, t), axis=1)))


def _search(F, seeds, max_newton, tol, distinct_tol=1e-6):
    zero = np.zeros(F.dim)
    found = []
    failures = {}
    trivial = 0
    for idx, s in enumerate(seeds):
        roots = [zero] + [p.z.flat() for p in found]
        try:
            try:
                y, gn, its = newton(F, s, roots, max_newton, tol)
            except (NoConvergence, NumericalFailure) as exc:
                try:
                    y, gn, its = newton(F, s, (), max_newton, tol)
                except (NoConvergence, NumericalFailure):
                    failures[idx] = str(exc)
                    continue
        except _Trivial:
            trivial += 1
            continue
        if any(np.linalg.norm(y - r) <= distinct_tol * (1 + np.linalg.norm(r)) for r in roots):
            trivial += 1
            continue
        z = F.vector(y)
        mminus, mzero = morse_data(F, y)
        target = F.m * F.n + F.n + 1
        found.append(CriticalPoint(
            z=z, value=F.value(y), grad_norm=gn, morse_index=mminus, morse_nullity=mzero,
            window=mminus <= target <= mminus + mzero, linf=sup_norm(z), seed=idx,
            iterations=its))
    return found, failures, trivial


def find_critical_points(spec, trunc=None, m=32, j=1, seeds=None, max_newton=60,
                         tol=GRAD_TOL, K=4.0, fd_points=20, max_doublings=4):
    """Nonzero critical points of ``phi_m``, sorted by value.

    ``spec`` is in physical time and normalized here.  A finite-difference
    audit of gradient and Hessian runs first.  Points whose sup-norm
    reaches the truncation radius trigger a rerun with K doubled.
    """
    if m < 8:
        raise ValueError("m must be at least 8")
    spec_n = spec.normalized()
    seeds = list(seeds) if seeds is not None else generate_seeds(m, j, spec.n)
    if not seeds:
        raise ValueError("at least one seed is required")
    for _ in range(max_doublings + 1):
        trunc = trunc or truncate_hamiltonian(spec_n, K)
        F = Functional(spec_n, trunc, m, j)
        fd = gradient_check(F, fd_points)
        if max(fd["gradient"], fd["hessian"]) > 1e-6:
            raise NumericalFailure(f"finite-difference audit failed: {fd}")
        points, failures, trivial = _search(F, seeds, max_newton, tol)
        if len(failures) == len(seeds):
            raise AllSeedsFailed(f"no seed converged: {failures}")
        if all(p.linf < trunc.K for p in points):
            points.sort(key=lambda p: p.value)
            return SearchResult(points, failures, trivial, trunc.K, fd)
        K = 2.0 * trunc.K
        trunc = None
    raise NumericalFailure("truncation radius kept growing")


# -- dimension counts --------------------------------------------------------------------

@dataclass
class DimensionCounts:
    m: int
    plus: int
    zero: int
    minus: int
    expected: tuple
    match: bool

    @property
    def inferred(self):
        """``(i, nu)`` read off the minus and zero counts."""
        n = self.expected[3]
        return self.minus - self.m * n - n, self.zero


@dataclass
class DimensionReport:
    frame: str
    j: int
    index_pair: tuple
    d: float
    counts: dict
    m: int
    m0: int
    status: str

    def require(self):
        if self.status == "failure":
            raise CountMismatch(f"dimension counts disagree at m={2 * self.m} for {self.frame}")
        return self

    def to_dict(self):
        return {"frame": self.frame, "j": self.j, "index": self.index_pair[0],
                "nullity": self.index_pair[1], "d": self.d, "m": self.m, "m0": self.m0,
                "status": self.status,
                "counts": {str(k): {"plus": c.plus, "zero": c.zero, "minus": c.minus,
                                    "match": c.match} for k, c in self.counts.items()}}


def _mode_slice(m_big, m, n):
    return slice((m_big - m) * n, (m_big + m + 1) * n)


def galerkin_dimension_check(B, frame=None, m=32, j=1, d=None, steps=1024, zero_tol=1e-8):
    """Eigenvalue counts of ``A - B`` on ``X_m`` against the L-index pair.

    Counts are computed for every m' <= 2m from one assembly at 2m; the
    empirical threshold ``m0`` is the smallest m' from which every count
    matches.  A mismatch at m alone is reported as "m too small"; at 2m it
    is a failure.
    """
    n = B.n
    frame = frame or LagrangianFrame.L0(n)
    Bc = B.conjugated(frame.p)
    big = 2 * m
    Lbig = assemble_A(big, j, n) - assemble_Bhat(big, j, Bc)
    Gbig = gram(big, j, n)
    pair = l_index(B, frame, float(j), steps * j)
    i, nu = pair.as_tuple()
    spectra = {}
    for mm in range(1, big + 1):
        sl = _mode_slice(big, mm, n)
        spectra[mm] = linalg.eigh(Lbig[sl, sl], Gbig[sl, sl], eigvals_only=True)
    if d is None:
        absev = np.abs(spectra[big])
        nonzero = absev[absev > zero_tol]
        d = 0.25 * float(np.min(nonzero))
    counts = {}
    for mm, ev in spectra.items():
        plus, minus = int(np.sum(ev >= d)), int(np.sum(ev <= -d))
        zero = ev.size - plus - minus
        expected = (mm * n - i - nu, nu, mm * n + i + n, n)
        counts[mm] = DimensionCounts(mm, plus, zero, minus, expected,
                                     (plus, zero, minus) == expected[:3])
    m0 = big + 1
    for mm in range(big, 0, -1):
        if not counts[mm].match:
            break
        m0 = mm
    if counts[big].match and counts[m].match:
        status = "ok"
    elif counts[big].match:
        status = "m too small"
    else:
        status = "failure"
    return DimensionReport(frame.label, j, (i, nu), d,
                           {k: counts[k] for k in (m, big)}, m, m0, status)
