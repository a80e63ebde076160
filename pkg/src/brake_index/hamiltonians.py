"""Hamiltonians ``H(t, z) = (Bhat(t) z, z) / 2 + Hhat(t, z)``, the built-in
catalog and sampled audits of the standing hypotheses (H1)-(H8)."""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import qmc

from .flow import CoefficientPath
from .symplectic import brake_N


@dataclass(frozen=True)
class HamiltonianSpec:
    """Nonlinear part Hhat plus quadratic part Bhat, in physical time.

    ``value(t, z)``, ``grad(t, z)`` and ``hess(t, z)`` take ``t`` of shape
    (N,) and ``z`` of shape (N, 2n) and return (N,), (N, 2n), (N, 2n, 2n).
    ``bhat=None`` means Bhat = 0; ``beta0 = 0`` means no bound is imposed.
    """

    name: str
    n: int
    value: object
    grad: object
    hess: object
    bhat: object = None
    theta: float = 0.25
    rbar: float = 1.0
    beta0: float = 0.0
    period: float = 2.0
    params: dict = field(default_factory=dict)

    @property
    def theta_hat(self):
        return max(self.theta, 0.25)

    def bhat_at(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.bhat is None:
            return np.zeros((t.size, 2 * self.n, 2 * self.n))
        return self.bhat(t)

    def full_hessian(self, t, z):
        """``H''(t, z) = Bhat(t) + Hhat''(t, z)``."""
        return self.bhat_at(t) + self.hess(t, z)

    def full_grad(self, t, z):
        return np.einsum("nij,nj->ni", self.bhat_at(t), z) + self.grad(t, z)

    def normalized(self):
        """The same system on the clock ``s = 2 t / T`` (period 2).

        ``dz/ds = J grad Hn(s, z)`` with ``Hn(s, z) = (T/2) H(s T/2, z)``.
        """
        c = self.period / 2.0
        if c == 1.0:
            return self
        value, grad, hess = self.value, self.grad, self.hess
        bhat = None
        if self.bhat is not None:
            bhat = CoefficientPath(lambda s, b=self.bhat: c * b(c * s), self.n, "normalized Bhat")
        return replace(
            self,
            value=lambda s, z: c * value(c * s, z),
            grad=lambda s, z: c * grad(c * s, z),
            hess=lambda s, z: c * hess(c * s, z),
            bhat=bhat,
            beta0=c * self.beta0,
            period=2.0,
        )

    def max_multiplier(self):
        """Largest admissible j (exclusive bound ``2 pi / (beta0 T)``)."""
        if self.beta0 <= 0:
            return np.inf
        return 2 * np.pi / (self.beta0 * self.period)


def _quartic_parts(amplitude):
    def value(t, z):
        return amplitude(t) * np.sum(z * z, axis=-1) ** 2

    def grad(t, z):
        r2 = np.sum(z * z, axis=-1)
        return (4.0 * amplitude(t) * r2)[:, None] * z

    def hess(t, z):
        r2 = np.sum(z * z, axis=-1)
        eye = np.eye(z.shape[-1])
        outer = z[:, :, None] * z[:, None, :]
        return amplitude(t)[:, None, None] * (4.0 * r2[:, None, None] * eye + 8.0 * outer)

    return value, grad, hess


def quartic(n=1, period=2.0):
    """``Hhat = (2 + cos(2 pi t / T)) |z|^4`` with Bhat = 0."""
    def amplitude(t):
        return 2.0 + np.cos(2 * np.pi * np.asarray(t) / period)

    value, grad, hess = _quartic_parts(amplitude)
    return HamiltonianSpec("QUARTIC", n, value, grad, hess, None, theta=0.25, rbar=1.0,
                           beta0=0.0, period=period)


def quartic_b(beta0=0.5, n=1, period=2.0):
    """QUARTIC plus ``Bhat(t) = (beta0 / 2)(1 + cos(2 pi t / T)) I``."""
    base = quartic(n, period)
    eye = np.eye(2 * n)

    def bhat(t):
        return (0.5 * beta0 * (1 + np.cos(2 * np.pi * t / period)))[:, None, None] * eye

    return replace(base, name="QUARTIC-B", bhat=CoefficientPath(bhat, n, "QUARTIC-B Bhat"),
                   beta0=beta0, params={"beta0": beta0})


def linear(c=1.0, n=1, period=2.0):
    """Purely quadratic ``H = c |z|^2 / 2`` (Hhat = 0)."""
    def zero_value(t, z):
        return np.zeros(z.shape[0])

    def zero_grad(t, z):
        return np.zeros_like(z)

    def zero_hess(t, z):
        return np.zeros(z.shape + (z.shape[-1],))

    return HamiltonianSpec("LINEAR", n, zero_value, zero_grad, zero_hess,
                           CoefficientPath.scalar(c, n), theta=0.25, rbar=1.0,
                           beta0=abs(c), period=period, params={"c": c})


def squared_norm(n=1, period=2.0):
    """``Hhat = |z|^2``: violates (H5) and (H6); used by the audit tests."""
    def value(t, z):
        return np.sum(z * z, axis=-1)

    def grad(t, z):
        return 2.0 * z

    def hess(t, z):
        return np.broadcast_to(2.0 * np.eye(z.shape[-1]), z.shape + (z.shape[-1],)).copy()

    return HamiltonianSpec("SQUARED-NORM", n, value, grad, hess, None, period=period)


def sign_changing(n=1, period=2.0):
    """``Hhat = |z|^4 - z_1^2 |z|^2 * 2`` takes negative values; fails (H4)."""
    def value(t, z):
        r2 = np.sum(z * z, axis=-1)
        return r2 * r2 - 2.0 * z[:, 0] ** 2 * r2

    def grad(t, z):
        r2 = np.sum(z * z, axis=-1)
        g = 4.0 * r2[:, None] * z - 4.0 * (z[:, 0] ** 2)[:, None] * z
        g[:, 0] -= 4.0 * z[:, 0] * r2
        return g

    def hess(t, z, h=1e-6):
        out = np.empty(z.shape + (z.shape[-1],))
        for i in range(z.shape[-1]):
            e = np.zeros(z.shape[-1])
            e[i] = h
            out[:, :, i] = (grad(t, z + e) - grad(t, z - e)) / (2 * h)
        return 0.5 * (out + np.swapaxes(out, 1, 2))

    return HamiltonianSpec("SIGN-CHANGING", n, value, grad, hess, None, period=period)


BUILTINS = {
    "QUARTIC": quartic,
    "QUARTIC-B": quartic_b,
    "LINEAR": linear,
    "SQUARED-NORM": squared_norm,
    "SIGN-CHANGING": sign_changing,
}


def builtin_systems():
    """Name -> factory for every built-in Hamiltonian."""
    return dict(BUILTINS)


def make_builtin(name, **params):
    try:
        factory = BUILTINS[name.upper()]
    except KeyError:
        raise KeyError(f"unknown built-in system {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(**params)


# -- audit --------------------------------------------------------------------

@dataclass
class ConditionVerdict:
    condition: str
    verdict: str
    worst: float
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"condition": self.condition, "verdict": self.verdict,
                "worst": float(self.worst), "witness": self.witness}


def _samples(spec, samples, radius, seed=0):
    dim = 2 * spec.n
    pts = qmc.Halton(d=dim + 1, scramble=True, seed=seed).random(samples)
    t = pts[:, 0] * spec.period
    # map the cube onto the ball through direction x radius
    g = qmc.Halton(d=dim, scramble=True, seed=seed + 1).random(samples) - 0.5
    g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-12)
    r = radius * pts[:, 1] ** (1.0 / dim)
    r = np.maximum(r, 1e-3 * radius)
    return t, g * r[:, None]


def _verdict(name, worst, ok, witness):
    return ConditionVerdict(name, "pass" if ok else "fail", worst, witness)


def _witness(t, z, i):
    return {"t": float(t[i]), "z": [float(v) for v in z[i]]}


def audit_conditions(spec, samples=2000, radius=3.0, tol=1e-9, seed=0):
    """Sampled verdicts for (H1)-(H8); ``samples >= 1000``."""
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    t, z = _samples(spec, samples, radius, seed)
    N = brake_N(spec.n)
    h = spec.value(t, z)
    scale = 1.0 + np.abs(h)
    out = []

    d1 = np.abs(spec.value(t + spec.period, z) - h) / scale
    i = int(np.argmax(d1))
    out.append(_verdict("H1", d1[i], d1[i] <= tol, _witness(t, z, i)))

    d2 = np.abs(spec.value(-t, z @ N) - h) / scale
    i = int(np.argmax(d2))
    out.append(_verdict("H2", d2[i], d2[i] <= tol, _witness(t, z, i)))

    lam = np.linalg.eigvalsh(spec.hess(t, z))[:, 0]
    i = int(np.argmin(lam))
    out.append(_verdict("H3", lam[i], lam[i] > 0, _witness(t, z, i)))

    i = int(np.argmin(h))
    out.append(_verdict("H4", h[i], h[i] >= -tol, _witness(t, z, i)))

    out.append(_audit_h5(spec, t, z))
    out.append(_audit_h6(spec, samples, radius, tol, seed))
    out.extend(_audit_bhat(spec, samples, tol))
    return out


def _audit_h5(spec, t, z):
    dirs = z / np.linalg.norm(z, axis=1, keepdims=True)
    ratios = []
    for r in (1e-1, 1e-2, 1e-3, 1e-4):
        ratios.append(float(np.max(np.abs(spec.value(t, r * dirs)) / r ** 2)))
    worst = ratios[-1]
    if worst <= 1e-3 and ratios[-1] <= ratios[0]:
        verdict = "pass"
    elif ratios[-1] >= 0.5 * ratios[0] and worst > 1e-6:
        verdict = "fail"
    else:
        verdict = "undecidable"
    return ConditionVerdict("H5", verdict, worst, {"ratios": ratios})


def _audit_h6(spec, samples, radius, tol, seed):
    t, z = _samples(spec, samples, 1.0, seed + 7)
    dirs = z / np.linalg.norm(z, axis=1, keepdims=True)
    rad = spec.rbar + (radius + spec.rbar) * np.linspace(0.0, 1.0, samples)
    zz = dirs * rad[:, None]
    h = spec.value(t, zz)
    euler = np.sum(zz * spec.grad(t, zz), axis=1)
    slack = (euler - h / spec.theta) / (1.0 + np.abs(euler))
    positive = h > 0
    i = int(np.argmin(np.where(positive, slack, -np.inf)))
    ok = bool(np.all(positive) and slack[i] >= -tol and 0 < spec.theta < 0.5)
    return _verdict("H6", slack[i], ok, _witness(t, zz, i))


def _audit_bhat(spec, samples, tol):
    n = spec.n
    N = brake_N(n)
    t = np.linspace(-spec.period, spec.period, max(samples // 4, 64))
    Bt = spec.bhat_at(t)
    asym = float(np.max(np.abs(Bt - np.swapaxes(Bt, 1, 2)))) if Bt.size else 0.0
    norms = np.linalg.norm(Bt, 2, axis=(1, 2))
    lam_min = float(np.min(np.linalg.eigvalsh(0.5 * (Bt + np.swapaxes(Bt, 1, 2)))))
    bound = spec.beta0 if spec.beta0 > 0 else 0.0
    norm_ok = float(np.max(norms)) <= bound + tol
    h7_ok = asym <= tol and norm_ok and lam_min >= -tol
    h7 = ConditionVerdict("H7", "pass" if h7_ok else "fail", float(np.max(norms)),
                          {"asymmetry": asym, "min_eigenvalue": lam_min, "beta0": spec.beta0})
    shift = float(np.max(np.abs(spec.bhat_at(t + spec.period) - Bt)))
    even = float(np.max(np.abs(spec.bhat_at(-t) - Bt)))
    comm = float(np.max(np.abs(Bt @ N - N @ Bt)))
    worst = max(shift, even, comm)
    h8 = ConditionVerdict("H8", "pass" if worst <= tol else "fail", worst,
                          {"periodic": shift, "even": even, "commutes_with_N": comm})
    return [h7, h8]
