"""Explicit solutions: ground-state bubbles, excited S-states and the singular solution.

Every radial pair carries its analytic derivatives so that residuals of the
radial systems can be evaluated to rounding level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .clifford import CliffordRep, CliffordError
from .params import GroundState, Graphene2D, ModelParams, NonIntegerDimensionError, RadialProfile

__all__ = [
    "GroundState", "Graphene2D", "ModelParams", "RadialPair",
    "ground_state_radial", "excited_explicit", "singular_solution",
    "ground_state_spinor", "excited_spinor", "nonlinearity_h", "apply_nonlinearity",
    "growth_constant", "sphere_area", "action_value", "potential",
]

Arr = np.ndarray


@dataclass(frozen=True)
class RadialPair:
    """A radial pair (u, v) = (sigma lam^-e U(r/lam), tau lam^-e V(r/lam)).

    ``U, V, dU, dV`` are the unscaled profiles; ``e`` is ``params.weight``.
    """

    params: ModelParams
    U: Callable[[Arr], Arr]
    V: Callable[[Arr], Arr]
    dU: Callable[[Arr], Arr]
    dV: Callable[[Arr], Arr]
    lam: float = 1.0
    sigma: int = 1
    tau: int = 1
    regular_at_origin: bool = True
    name: str = ""

    def _r(self, r) -> Arr:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("r must be non-negative")
        if np.any(r == 0) and not self.regular_at_origin:
            raise ValueError(f"{self.name}: evaluation at r = 0 is not supported")
        return r / self.lam

    def u(self, r) -> Arr:
        return self.sigma * self.lam ** -self.params.weight * self.U(self._r(r))

    def v(self, r) -> Arr:
        return self.tau * self.lam ** -self.params.weight * self.V(self._r(r))

    def du(self, r) -> Arr:
        return self.sigma * self.lam ** (-self.params.weight - 1) * self.dU(self._r(r))

    def dv(self, r) -> Arr:
        return self.tau * self.lam ** (-self.params.weight - 1) * self.dV(self._r(r))

    def __call__(self, r) -> tuple[Arr, Arr]:
        return self.u(r), self.v(r)

    def profile(self, rs) -> RadialProfile:
        return RadialProfile(self.params, rs, self.u(rs), self.v(rs),
                             meta={"source": self.name, "lam": self.lam, "sigma": self.sigma})


def _check_scaling(lam, sigma):
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam!r}")
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")


def ground_state_radial(n: float, lam: float = 1.0, sigma: int = 1) -> RadialPair:
    """Ground-state bubble U = c r (1+r^2)^(-n/2), V = c (1+r^2)^(-n/2), c = n^((n-1)/2)."""
    _check_scaling(lam, sigma)
    p = GroundState(n)
    c = n ** ((n - 1) / 2)

    def V(r):
        return c * (1 + r * r) ** (-n / 2)

    def U(r):
        return r * V(r)

    def dU(r):
        return V(r) * (1 - (n - 1) * r * r) / (1 + r * r)

    def dV(r):
        return -n * r * V(r) / (1 + r * r)

    return RadialPair(p, U, V, dU, dV, lam=lam, sigma=sigma, tau=sigma, name=f"ground_state(n={n})")


def _log_sech(x):
    """log(1/(e^x + e^-x)) without overflow."""
    ax = np.abs(x)
    return -ax - np.log1p(np.exp(-2 * ax))


def excited_explicit(S: int, lam: float = 1.0, sigma: int = 1) -> RadialPair:
    """Explicit S-state for beta1 = 1, beta2 = 1/2.

    U = A r^S / (r^m + r^-m),  V = A r^(-S-1) / (r^m + r^-m),  m = 2S+1,  A = sqrt(2|m|),
    with tau = sigma for m > 0 and tau = -sigma for m < 0.
    """
    _check_scaling(lam, sigma)
    p = Graphene2D(1.0, 0.5, S)
    m = 2 * p.S + 1
    A = np.sqrt(2 * abs(m))

    if p.S == 0:
        def U(r):
            return A * r / (1 + r * r)

        def V(r):
            return A / (1 + r * r)
    else:
        def U(r):
            t = np.log(r)
            return A * np.exp(p.S * t + _log_sech(m * t))

        def V(r):
            t = np.log(r)
            return A * np.exp((-p.S - 1) * t + _log_sech(m * t))

    def dU(r):
        return U(r) * (p.S - m * np.tanh(m * np.log(r))) / r

    def dV(r):
        return V(r) * (-p.S - 1 - m * np.tanh(m * np.log(r))) / r

    if p.S == 0:
        def dU(r):  # noqa: F811
            return A * (1 - r * r) / (1 + r * r) ** 2

        def dV(r):  # noqa: F811
            return -2 * A * r / (1 + r * r) ** 2

    tau = sigma if m > 0 else -sigma
    return RadialPair(p, U, V, dU, dV, lam=lam, sigma=sigma, tau=tau,
                      regular_at_origin=(p.S == 0), name=f"excited(S={p.S})")


def singular_solution(n: float) -> RadialPair:
    """u = v = sqrt(((n-1)/2)^(n-1) / 2) r^(-(n-1)/2), singular at the origin."""
    p = GroundState(n)
    e = (n - 1) / 2
    c = np.sqrt(0.5 * e ** (n - 1))

    def U(r):
        return c * r ** -e

    def dU(r):
        return -e * c * r ** (-e - 1)

    return RadialPair(p, U, U, dU, dU, regular_at_origin=False, name=f"singular(n={n})")


def _points(rep: CliffordRep, x) -> tuple[Arr, Arr]:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != rep.n:
        raise CliffordError(f"expected points with last axis {rep.n}, got {x.shape}")
    return x, np.linalg.norm(x, axis=-1)


def ground_state_spinor(rep: CliffordRep, lam: float = 1.0, nvec=None, x=None) -> Arr:
    """psi(x) = lam^-(n-1)/2 (V(|x|/lam) n, i U(|x|/lam) (x/|x|).sigma n) at points x (..., n).

    ``nvec`` is a unit vector of C^(N/2) (default e_1).  ``x = 0`` is allowed.
    Written without the 1/|x|: U(r)/r = V(r), so psi is smooth everywhere.
    """
    _check_scaling(lam, 1)
    n = rep.n
    if nvec is None:
        nvec = np.zeros(rep.half, dtype=complex)
        nvec[0] = 1
    nvec = np.asarray(nvec, dtype=complex)
    if nvec.shape != (rep.half,) or not np.isclose(np.linalg.norm(nvec), 1.0):
        raise ValueError(f"nvec must be a unit vector in C^{rep.half}")
    x, r = _points(rep, x)
    c = n ** ((n - 1) / 2) * lam ** (-(n - 1) / 2)
    V = c * (1 + (r / lam) ** 2) ** (-n / 2)
    top = V[..., None] * nvec
    bottom = 1j * (V / lam)[..., None] * (rep.sigma_dot(x) @ nvec)
    return np.concatenate([top, bottom], axis=-1)


def excited_spinor(S: int, lam: float = 1.0, sigma: int = 1, x=None) -> Arr:
    """psi = (v(r) e^(iS theta), i u(r) e^(i(S+1) theta)) at planar points x (..., 2).

    The value at x = 0 is the continuous limit.
    """
    pair = excited_explicit(S, lam, sigma)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError("excited states live in the plane")
    r = np.hypot(x[..., 0], x[..., 1])
    z = x[..., 0] + 1j * x[..., 1]
    origin = r == 0
    rs = np.where(origin, 1.0, r)
    w = np.where(origin, 1.0, z / rs)
    u, v = pair.u(rs), pair.v(rs)
    out = np.stack([v * w ** S, 1j * u * w ** (S + 1)], axis=-1)
    if np.any(origin):
        lim = np.zeros(2, dtype=complex)
        scale = pair.lam ** -0.5 * np.sqrt(2 * abs(2 * S + 1))
        if S == 0:
            lim[0] = pair.tau * scale
        elif S == -1:
            lim[1] = 1j * pair.sigma * scale
        out[origin] = lim
    return out


def _h_diag(params: ModelParams, z: Arr) -> Arr:
    """Diagonal of h(z) for the diagonal models; z has shape (..., N)."""
    a = np.abs(z) ** 2
    if isinstance(params, Graphene2D):
        b1, b2 = params.beta1, params.beta2
        return np.stack([b1 * a[..., 0] + 2 * b2 * a[..., 1],
                         2 * b2 * a[..., 0] + b1 * a[..., 1]], axis=-1)
    n = params.dim
    s = a.sum(axis=-1) ** (1 / (n - 1))
    return np.broadcast_to(s[..., None], z.shape)


def nonlinearity_h(params: ModelParams, z) -> Arr:
    """The Hermitian matrix h(z), shape (..., N, N)."""
    z = np.asarray(z, dtype=complex)
    d = _h_diag(params, z)
    out = np.zeros(z.shape + (z.shape[-1],), dtype=d.dtype)
    idx = np.arange(z.shape[-1])
    out[..., idx, idx] = d
    return out


def apply_nonlinearity(params: ModelParams, z) -> Arr:
    """h(z) z, shape (..., N)."""
    z = np.asarray(z, dtype=complex)
    if isinstance(params, Graphene2D) and z.shape[-1] != 2:
        raise ValueError("the graphene nonlinearity acts on C^2")
    return _h_diag(params, z) * z


def growth_constant(params: ModelParams) -> float:
    """C with ||h(z)|| <= C |z|^(2^sharp - 2)."""
    if isinstance(params, Graphene2D):
        return float(max(params.beta1, 2 * params.beta2))
    return 1.0


def sphere_area(k: float) -> float:
    """|S^k| = 2 pi^((k+1)/2) / Gamma((k+1)/2)."""
    return float(2 * np.exp((k + 1) / 2 * np.log(np.pi) - gammaln((k + 1) / 2)))


def action_value(n: float) -> float:
    """Ground-state action (1/(2n)) (n/2)^n |S^n|."""
    if not n >= 2:
        raise ValueError("n must be >= 2")
    return float((n / 2) ** n * sphere_area(n) / (2 * n))


def potential(params: ModelParams, z) -> Arr:
    """F(z) with real gradient h(z) z: |z|^(2#)/2# for the plain model."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z) ** 2
    if isinstance(params, Graphene2D):
        return (0.25 * params.beta1 * (a[..., 0] ** 2 + a[..., 1] ** 2)
                + params.beta2 * a[..., 0] * a[..., 1])
    q = params.critical_exponent
    return a.sum(axis=-1) ** (q / 2) / q
