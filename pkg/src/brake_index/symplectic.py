"""Constant matrices and linear-algebra primitives of Sp(2n).

All matrices are plain ``numpy`` arrays.  Block conventions follow

    M = [[S, V],
         [T, U]]

with n x n blocks, so that the columns of ``[V; U]`` span the image of
``L0 = {0} + R^n`` under ``M``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DegenerateEndpoint

TOL_SYMP = 1e-10


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def standard_J(n):
    """The standard symplectic matrix ``[[0, -I], [I, 0]]`` of size 2n."""
    n = _check_n(n)
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


def brake_N(n):
    """The brake reflection ``diag(-I_n, I_n)``."""
    n = _check_n(n)
    return np.diag(np.concatenate([-np.ones(n), np.ones(n)]))


def sign_Jn(n):
    """``J_n = diag(-1, 1, ..., 1)``."""
    n = _check_n(n)
    d = np.ones(n)
    d[0] = -1.0
    return np.diag(d)


def middle_factor(V):
    """``[[0, V], [-V^{-T}, 0]]``; symplectic for every invertible V."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    M = np.zeros((2 * n, 2 * n))
    M[:n, n:] = V
    M[n:, :n] = -np.linalg.inv(V).T
    return M


def lower_factor(W):
    """``[[I, 0], [W, I]]``; symplectic iff W is symmetric."""
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    M = np.eye(2 * n)
    M[n:, :n] = W
    return M


def endpoint_Mplus(n):
    """``M+ = [[0, I], [-I, 0]]``."""
    return middle_factor(np.eye(_check_n(n)))


def endpoint_Mminus(n):
    """``M- = [[0, J_n], [-J_n, 0]]``."""
    return middle_factor(sign_Jn(n))


def blocks(M):
    """Split a 2n x 2n matrix (or a stack of them) into (S, V, T, U)."""
    M = np.asarray(M)
    n = M.shape[-1] // 2
    return M[..., :n, :n], M[..., :n, n:], M[..., n:, :n], M[..., n:, n:]


def symplectic_defect(M):
    """``max |M^T J M - J|``; works on stacks of matrices."""
    M = np.asarray(M, dtype=float)
    if M.shape[-1] % 2 or M.shape[-1] != M.shape[-2]:
        raise ValueError(f"expected square matrices of even size, got {M.shape}")
    J = standard_J(M.shape[-1] // 2)
    E = np.swapaxes(M, -1, -2) @ J @ M - J
    return float(np.max(np.abs(E))) if E.size else 0.0


def is_symplectic(M, tol=TOL_SYMP):
    return symplectic_defect(M) <= tol


def resymplectify(M):
    """One first-order correction step ``M <- M (I + J E / 2)``.

    ``E = M^T J M - J`` is skew, and the correction removes it to first
    order.  Works on stacks.
    """
    M = np.asarray(M, dtype=float)
    J = standard_J(M.shape[-1] // 2)
    E = np.swapaxes(M, -1, -2) @ J @ M - J
    return M + 0.5 * M @ (J @ E)


@dataclass(frozen=True)
class LagrangianFrame:
    """Orthogonal symplectic P with P L0 = L."""

    p: np.ndarray
    label: str = "general"

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if not is_symplectic(p, 1e-10):
            raise ValueError("frame matrix is not symplectic")
        if np.max(np.abs(p.T @ p - np.eye(p.shape[0]))) > 1e-10:
            raise ValueError("frame matrix is not orthogonal")
        object.__setattr__(self, "p", p)

    @property
    def n(self):
        return self.p.shape[0] // 2

    @classmethod
    def L0(cls, n):
        return cls(np.eye(2 * _check_n(n)), "L0")

    @classmethod
    def L1(cls, n):
        return cls(endpoint_Mplus(n), "L1")

    @classmethod
    def from_unitary(cls, A, B, label="general"):
        """Frame ``[[A, -B], [B, A]]`` built from a unitary ``A + iB``."""
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float)
        return cls(np.block([[A, -B], [B, A]]), label)


def unipotent_factorization(M, tol=1e-12):
    """Factor ``M = Lower(W) @ middle_factor(V) @ Lower(W2)``.

    Requires ``det V_M != 0``.  Returns ``(W, V, W2)`` with
    ``W = U V^{-1}`` and ``W2 = V^{-1} S``, both symmetric for symplectic M.
    """
    S, V, _, U = blocks(np.asarray(M, dtype=float))
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] <= tol * max(1.0, sv[0]):
        raise DegenerateEndpoint(f"V block is singular (smallest singular value {sv[-1]:.3e})")
    Vinv = np.linalg.inv(V)
    W = U @ Vinv
    W2 = Vinv @ S
    return 0.5 * (W + W.T), V.copy(), 0.5 * (W2 + W2.T)


def _orthogonal_log(Q):
    """Real skew-symmetric X with expm(X) = Q, for Q in SO(n).

    Built from the real Schur form so that eigenvalue -1 (rotation by pi)
    is handled; scipy's ``logm`` goes complex there.
    """
    T, Z = linalg.schur(Q, output="real")
    n = Q.shape[0]
    X = np.zeros((n, n))
    minus_ones = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-12:
            c, s = T[i, i], T[i + 1, i]
            theta = np.arctan2(s, c)
            X[i + 1, i] = theta
            X[i, i + 1] = -theta
            i += 2
        else:
            if T[i, i] < 0:
                minus_ones.append(i)
            i += 1
    if len(minus_ones) % 2:
        raise ValueError("matrix is not in SO(n)")
    for a, b in zip(minus_ones[::2], minus_ones[1::2]):
        X[b, a] = np.pi
        X[a, b] = -np.pi
    return Z @ X @ Z.T


def gl_homotopy(V, tol=1e-12):
    """Continuous map ``s -> V(s)`` in GL(n), s in [0, 1], from V to I or J_n.

    Polar decomposition ``V = Q P``: the positive factor moves log-linearly
    to I and the orthogonal factor moves geodesically to I (det V > 0) or
    J_n (det V < 0), so the sign of the determinant never changes.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    d = np.linalg.det(V)
    if abs(d) < tol:
        raise DegenerateEndpoint(f"|det V| = {abs(d):.3e} is below {tol}")
    Q, P = linalg.polar(V)
    w, E = np.linalg.eigh(0.5 * (P + P.T))
    logw = np.log(w)
    target = np.eye(n) if d > 0 else sign_Jn(n)
    X = _orthogonal_log(Q @ target.T)

    def at(s):
        if s <= 0.0:
            return V.copy()
        if s >= 1.0:
            return target.copy()
        power = (E * np.exp((1 - s) * logw)) @ E.T
        return linalg.expm((1 - s) * X) @ target @ power

    return at


def gl_path(V, steps=64, tol=1e-12):
    """``steps + 1`` samples of :func:`gl_homotopy`, shape (steps + 1, n, n)."""
    at = gl_homotopy(V, tol)
    steps = max(int(steps), 1)
    return np.stack([at(s) for s in np.linspace(0.0, 1.0, steps + 1)])
