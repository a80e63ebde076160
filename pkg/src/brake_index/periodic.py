"""omega-index pairs of 2-periodic paths, realised as relative Morse indices.

On the twisted space ``z(t + T) = omega z(t)``, ``omega = exp(i theta)``,
the basis ``exp(i lam_k t) c_k`` with ``lam_k = (theta + 2 pi k) / T``
turns the form ``int (-J z', z) - (B z, z)`` into the Hermitian matrix

    H[l, k] = delta_lk lam_k (-iJ) - Bhat_{l-k},

``Bhat_p`` being the Fourier coefficients of B over one period (the twist
cancels in the products).  ``i_omega(B) = negdim H_B - negdim H_0 +
offset(omega)``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnstableTruncation
from .flow import CoefficientPath, fundamental_solution, iterate_path
from .index import IndexPair, l0_index, l1_index
from .symplectic import standard_J

EIG_TOL = 1e-7
NULL_TOL = 1e-8


@dataclass(frozen=True)
class RelativeMorseData:
    negdim_B: int
    negdim_ref: int
    calibration_offset: int
    resolved_index: int
    m: int


def omega_nullity(gamma, omega, tol=NULL_TOL):
    """Complex dimension of ``ker(gamma(end) - omega I)``."""
    M = gamma.end if hasattr(gamma, "end") else np.asarray(gamma)
    D = M.astype(complex) - omega * np.eye(M.shape[0])
    sv = np.linalg.svd(D, compute_uv=False)
    return int(np.sum(sv <= tol * max(1.0, np.max(np.abs(M)))))


def fourier_coefficients(B, period, pmax, samples=None):
    """``Bhat_p = (1/T) int_0^T B(t) exp(-2 pi i p t / T) dt`` for |p| <= pmax."""
    samples = samples or max(8 * pmax + 64, 256)
    t = np.arange(samples) * (period / samples)
    vals = B(t)
    fft = np.fft.fft(vals, axis=0) / samples
    p = np.arange(-pmax, pmax + 1)
    return fft[p % samples]


def _hermitian_form(B, omega, m, period):
    n = B.n
    theta = np.angle(omega) % (2 * np.pi)
    ks = np.arange(-m, m + 1)
    lam = (theta + 2 * np.pi * ks) / period
    mJ = -1j * standard_J(n)
    size = (2 * m + 1) * 2 * n
    H = np.zeros((size, size), dtype=complex)
    if B is not None:
        coeffs = fourier_coefficients(B, period, 2 * m)
        for a in range(2 * m + 1):
            for b in range(2 * m + 1):
                H[a * 2 * n:(a + 1) * 2 * n, b * 2 * n:(b + 1) * 2 * n] = -coeffs[(a - b) + 2 * m]
    for a in range(2 * m + 1):
        H[a * 2 * n:(a + 1) * 2 * n, a * 2 * n:(a + 1) * 2 * n] += lam[a] * mJ
    return 0.5 * (H + H.conj().T)


def negdim(B, omega, m, period=2.0, tol=EIG_TOL):
    """Number of eigenvalues below ``-tol`` of the truncated twisted form."""
    H = _hermitian_form(B, omega, m, period)
    ev = np.linalg.eigvalsh(H)
    scale = max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev < -tol * scale))


def _zero_coefficient(n):
    return CoefficientPath.constant(np.zeros((2 * n, 2 * n)), "0")


def relative_index(B, omega, m, period=2.0):
    """``negdim H_B - negdim H_0``, checked at m and 2m."""
    zero = _zero_coefficient(B.n)
    rels = []
    for mm in (m, 2 * m):
        rels.append((negdim(B, omega, mm, period), negdim(zero, omega, mm, period)))
    (b1, r1), (b2, r2) = rels
    if b1 - r1 != b2 - r2:
        raise UnstableTruncation(
            f"relative index {b1 - r1} at m={m} but {b2 - r2} at m={2 * m}")
    return b1, r1


def _is_one(omega):
    return abs(omega - 1.0) < 1e-12


_unit_offsets = {}


def anchor_system(n):
    """Fixed brake-symmetric system ``(1 + cos(pi t) / 2) I`` used to pin offset(1)."""
    eye = np.eye(2 * n)
    return CoefficientPath.trigonometric(eye, [0.5 * eye], description="anchor")


def calibrate_unit_offset(B, m=16, steps=1024):
    """Fix offset(1) so that ``i_1(gamma^2) = i_L0 + i_L1 + n`` holds on ``B``.

    The result is stored for the process lifetime and returned.
    """
    i0 = l0_index(B, 1.0, steps).index
    i1 = l1_index(B, 1.0, steps).index
    b, r = relative_index(B, 1.0, m)
    offset = i0 + i1 + B.n - (b - r)
    _unit_offsets[B.n] = offset
    return offset


def omega_offset(omega, n):
    """Index of the zero coefficient.

    omega != 1: the flow of ``eps I`` never meets the eigenvalue omega for
    small eps, and Bott's sum ``i_1(gamma^k) = sum_{w^k = 1} i_w(gamma)``
    on that family forces ``i_w = 0`` at every nontrivial root; hence 0.
    omega == 1: calibrated once per n on :func:`anchor_system`.
    """
    if not _is_one(omega):
        return 0
    if n not in _unit_offsets:
        calibrate_unit_offset(anchor_system(n))
    return _unit_offsets[n]


def omega_index_data(B, omega, m=16, period=2.0):
    if m < 8:
        raise ValueError("m must be at least 8")
    if abs(abs(omega) - 1.0) > 1e-12:
        raise ValueError("omega must lie on the unit circle")
    b, r = relative_index(B, omega, m, period)
    offset = omega_offset(omega, B.n)
    return RelativeMorseData(b, r, offset, b - r + offset, m)


def omega_index(B, omega, m=16, period=2.0):
    """``i_omega`` of the fundamental solution of B over one period."""
    return omega_index_data(B, omega, m, period).resolved_index


def omega_pair(B, omega, m=16, steps=1024, gamma2=None):
    """``(i_omega(gamma^2), nu_omega(gamma^2))`` for a brake-symmetric B."""
    if gamma2 is None:
        gamma2 = fundamental_solution(B, 2.0, 2 * steps)
    return IndexPair(omega_index(B, omega, m), omega_nullity(gamma2, omega), f"omega={omega:.6g}")


def l0_omega_index_sqrtminus1(B, steps=1024):
    """``i^{L0}_{sqrt(-1)}(gamma^1) := i_L0(gamma^2) - i_L0(gamma^1)``, same for nu."""
    one = l0_index(B, 1.0, steps)

    def double(Bp):
        return iterate_path(fundamental_solution(Bp, 1.0, steps), 2)

    two = l0_index(B, 2.0, steps, builder=double)
    return IndexPair(two.index - one.index, two.nullity - one.nullity, "L0,sqrt(-1)")


@lru_cache(maxsize=None)
def root_of_unity(k, power):
    """``omega_k^power`` with ``omega_k = exp(pi i / k)``."""
    return complex(np.exp(1j * np.pi * power / k))
