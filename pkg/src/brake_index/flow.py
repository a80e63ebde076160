"""Coefficient paths B(t), fundamental solutions of y' = J B(t) y, and
the iteration paths gamma^k of a brake-symmetric system."""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DomainMismatch, InvalidCoefficient, NumericalFailure
from .symplectic import brake_N, standard_J

SYM_TOL = 1e-10

_C1 = 0.5 - np.sqrt(3.0) / 6.0
_C2 = 0.5 + np.sqrt(3.0) / 6.0


class CoefficientPath:
    """A continuous symmetric matrix function t -> B(t) of size 2n.

    ``evaluator`` must accept a 1-d array of times and return an array of
    shape (len(t), 2n, 2n).
    """

    def __init__(self, evaluator, n, description="", two_periodic=False,
                 brake_symmetric=False, positive=None):
        self._evaluator = evaluator
        self.n = int(n)
        self.description = description
        self.two_periodic = two_periodic
        self.brake_symmetric = brake_symmetric
        self.positive = positive

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.asarray(self._evaluator(ts), dtype=float)
        if out.shape != (ts.size, 2 * self.n, 2 * self.n):
            raise InvalidCoefficient(
                f"evaluator returned shape {out.shape}, expected {(ts.size, 2 * self.n, 2 * self.n)}")
        return out[0] if scalar else out

    def __repr__(self):
        return f"CoefficientPath(n={self.n}, {self.description!r})"

    # -- builders ---------------------------------------------------------

    @classmethod
    def constant(cls, matrix, description=None):
        M = np.asarray(matrix, dtype=float)
        n = M.shape[0] // 2
        MN = brake_N(n)
        commutes = np.allclose(M @ MN, MN @ M, atol=SYM_TOL)
        return cls(lambda t: np.broadcast_to(M, (t.size,) + M.shape).copy(), n,
                   description or "constant", two_periodic=True,
                   brake_symmetric=commutes)

    @classmethod
    def scalar(cls, c, n):
        return cls.constant(c * np.eye(2 * n), f"{c:g}*I")

    @classmethod
    def trigonometric(cls, c0, cos_terms=(), sin_terms=(), freq=np.pi, description="trig"):
        """``B(t) = C0 + sum_p cos(p f t) C_p + sin(p f t) S_p``, p = 1, 2, ...

        ``cos_terms[p-1]`` and ``sin_terms[p-1]`` are 2n x 2n matrices.
        """
        c0 = np.asarray(c0, dtype=float)
        cos_terms = [np.asarray(c, dtype=float) for c in cos_terms]
        sin_terms = [np.asarray(s, dtype=float) for s in sin_terms]

        def evaluate(t):
            out = np.broadcast_to(c0, (t.size,) + c0.shape).copy()
            for p, C in enumerate(cos_terms, start=1):
                out += np.cos(p * freq * t)[:, None, None] * C
            for p, S in enumerate(sin_terms, start=1):
                out += np.sin(p * freq * t)[:, None, None] * S
            return out

        path = cls(evaluate, c0.shape[0] // 2, description)
        path.coefficients = {"c0": c0, "cos": cos_terms, "sin": sin_terms, "freq": freq}
        return path

    def shifted(self, eps):
        """``B(t) + eps I``."""
        eye = np.eye(2 * self.n)
        return CoefficientPath(lambda t: self(t) + eps * eye, self.n,
                               f"{self.description}{eps:+g}*I",
                               self.two_periodic, self.brake_symmetric)

    def conjugated(self, P):
        """``P^T B(t) P``, the coefficient of ``P^{-1} gamma P`` for orthogonal P."""
        P = np.asarray(P, dtype=float)
        return CoefficientPath(lambda t: P.T @ self(t) @ P, self.n,
                               f"P^T[{self.description}]P")

    def rescaled(self, factor):
        """``factor * B(factor * t)``: the same flow on a stretched clock."""
        return CoefficientPath(lambda t: factor * self(factor * t), self.n,
                               f"{factor:g}*{self.description}(t*{factor:g})")


@dataclass
class SymplecticPath:
    """Discrete symplectic path: ``values[i]`` is gamma(grid[i])."""

    grid: np.ndarray
    values: np.ndarray
    coefficient: object = field(default=None, repr=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != self.grid.size:
            raise ValueError("grid and values disagree in length")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def n(self):
        return self.values.shape[-1] // 2

    @property
    def interval(self):
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def end(self):
        return self.values[-1]

    def value_at(self, t, atol=1e-9):
        """Value at a grid node (no interpolation)."""
        i = int(np.argmin(np.abs(self.grid - t)))
        if abs(self.grid[i] - t) > atol:
            raise DomainMismatch(f"t = {t} is not a grid node")
        return self.values[i]

    def rescaled_to_unit(self):
        """Same values on the grid mapped affinely onto [0, 1]."""
        a, b = self.interval
        return SymplecticPath((self.grid - a) / (b - a), self.values, self.coefficient)

    def conjugated(self, P):
        P = np.asarray(P, dtype=float)
        return SymplecticPath(self.grid, np.linalg.inv(P) @ self.values @ P)


def _magnus_generators(B, t0, h, steps):
    J = standard_J(B.n)
    starts = t0 + h * np.arange(steps)
    b1 = B(starts + _C1 * h)
    b2 = B(starts + _C2 * h)
    for b in (b1, b2):
        if not np.all(np.isfinite(b)):
            raise NumericalFailure("coefficient evaluation produced non-finite values")
        asym = np.max(np.abs(b - np.swapaxes(b, -1, -2)))
        if asym > SYM_TOL * max(1.0, np.max(np.abs(b))):
            raise InvalidCoefficient(f"B(t) is not symmetric (defect {asym:.3e})")
    A1 = J @ b1
    A2 = J @ b2
    return 0.5 * h * (A1 + A2) + (np.sqrt(3.0) / 12.0) * h * h * (A2 @ A1 - A1 @ A2)


def fundamental_solution(B, interval=1.0, steps=1024):
    """Fundamental solution of ``y' = J B(t) y`` on ``[0, tau]``.

    Fourth-order two-point Gauss-Magnus stepping.  Each factor is the
    exponential of a Hamiltonian matrix, so products stay symplectic to
    roundoff without projection.  ``interval`` is tau or a pair ``(0, tau)``.
    """
    if np.ndim(interval) == 0:
        t0, t1 = 0.0, float(interval)
    else:
        t0, t1 = map(float, interval)
    if t0 != 0.0:
        raise DomainMismatch("fundamental solutions start at t = 0")
    steps = int(steps)
    if steps < 16:
        raise ValueError("steps must be at least 16")
    h = (t1 - t0) / steps
    omegas = _magnus_generators(B, t0, h, steps)
    factors = linalg.expm(omegas)
    if not np.all(np.isfinite(factors)):
        raise NumericalFailure("matrix exponential overflowed")
    values = np.empty((steps + 1, 2 * B.n, 2 * B.n))
    values[0] = np.eye(2 * B.n)
    current = values[0]
    for i in range(steps):
        current = factors[i] @ current
        values[i + 1] = current
    grid = np.linspace(t0, t1, steps + 1)
    return SymplecticPath(grid, values, B)


def iterate_path(gamma1, k):
    """The k-th iteration path of a brake-symmetric fundamental solution.

    ``gamma1`` lives on [0, 1].  On [2p, 2p+1] the iterate is
    ``gamma(t - 2p) gamma(2)^p``; on [2p+1, 2p+2] it is
    ``N gamma(2p+2-t) gamma(1)^{-1} N gamma(1) gamma(2)^p`` with
    ``gamma(2) = N gamma(1)^{-1} N gamma(1)``.  Integers are grid nodes.
    """
    k = int(k)
    if k < 1:
        raise ValueError("k must be positive")
    a, b = gamma1.interval
    if abs(a) > 1e-12 or abs(b - 1.0) > 1e-12:
        raise DomainMismatch(f"gamma1 must live on [0, 1], got [{a}, {b}]")
    if k == 1:
        return gamma1
    N = brake_N(gamma1.n)
    g = gamma1.grid
    vals = gamma1.values
    g1 = vals[-1]
    reflect = np.linalg.inv(g1) @ N @ g1
    g2 = N @ reflect
    grids = [g]
    values = [vals]
    power = np.eye(2 * gamma1.n)
    for q in range(1, k):
        if q % 2 == 1:
            seg_grid = q + (1.0 - g[::-1])
            seg_vals = N @ vals[::-1] @ reflect @ power
        else:
            power = power @ g2
            seg_grid = q + g
            seg_vals = vals @ power
        grids.append(seg_grid[1:])
        values.append(seg_vals[1:])
    return SymplecticPath(np.concatenate(grids), np.concatenate(values), gamma1.coefficient)


@dataclass
class BrakeSymmetryReport:
    periodic_defect: float
    brake_defect: float
    tol: float
    two_periodic: bool
    brake_symmetric: bool


def check_brake_symmetry(B, samples=64, tol=1e-10):
    """Sampled defects of ``B(t+2) = B(t)`` and ``B(1+t) N = N B(1-t)``."""
    if samples < 8:
        raise ValueError("samples must be at least 8")
    N = brake_N(B.n)
    t = np.linspace(0.0, 2.0, int(samples), endpoint=False)
    periodic = float(np.max(np.abs(B(t + 2.0) - B(t))))
    brake = float(np.max(np.abs(B(1.0 + t) @ N - N @ B(1.0 - t))))
    ok_p = periodic <= tol
    ok_b = brake <= tol
    if ok_p:
        B.two_periodic = True
    if ok_b:
        B.brake_symmetric = True
    return BrakeSymmetryReport(periodic, brake, tol, ok_p, ok_b)
