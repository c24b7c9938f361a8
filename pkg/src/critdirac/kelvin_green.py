"""The spinor Kelvin transform, pointwise Dirac operator by finite differences,
the Green's function of the Dirac operator and its convolution."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .clifford import CliffordRep, inversion_matrix
from .closed_form import apply_nonlinearity, sphere_area
from .params import ModelParams, RadialProfile
from .sphere import sphere_rule

__all__ = ["PointSpinorFn", "QuadratureError", "kelvin", "kelvin_profile", "dirac_point",
           "verify_dkelvin", "radial_angular_integral", "verify_norm_identities",
           "green_gamma", "green_convolve", "verify_integral_equation", "verify_green_identity"]


class QuadratureError(RuntimeError):
    """A quadrature failed its refinement check."""


@dataclass(frozen=True)
class PointSpinorFn:
    """Vectorised spinor field x (..., n) -> (..., N)."""

    rep: CliffordRep
    fn: Callable[[np.ndarray], np.ndarray]
    smooth: bool = True

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.rep.n:
            raise ValueError(f"expected points with last axis {self.rep.n}, got {x.shape}")
        return np.asarray(self.fn(x), dtype=complex)

    def scaled(self, c: complex) -> "PointSpinorFn":
        return PointSpinorFn(self.rep, lambda x: c * self.fn(x), self.smooth)


def kelvin(psi: PointSpinorFn) -> PointSpinorFn:
    """psi_K(x) = |x|^-(n-1) U(x) psi(x/|x|^2); x = 0 is rejected."""
    rep = psi.rep
    n = rep.n

    def fn(x):
        r2 = np.sum(x * x, axis=-1)
        if np.any(r2 == 0):
            raise ValueError("the Kelvin transform is not defined at x = 0")
        y = x / r2[..., None]
        val = np.einsum("...ab,...b->...a", inversion_matrix(rep, x), psi(y))
        return r2[..., None] ** (-(n - 1) / 2) * val

    return PointSpinorFn(rep, fn, psi.smooth)


def kelvin_profile(profile: RadialProfile, n: float | None = None) -> RadialProfile:
    """Radial form of the Kelvin transform: (u_K, v_K)(r) = r^-(n-1) (v(1/r), u(1/r))."""
    if n is None:
        n = profile.params.n
    r = 1 / profile.rs[::-1]
    w = r ** -(n - 1)
    return RadialProfile(profile.params, r, w * profile.vs[::-1], w * profile.us[::-1],
                         meta={"source": "kelvin"})


def dirac_point(psi: PointSpinorFn, x, h: float = 1e-3, relative: bool = False) -> np.ndarray:
    """D psi(x) = -i sum_j alpha_j d_j psi(x) by 4th-order central differences.

    The step is ``h`` or, with ``relative=True``, ``h |x|`` at each point.
    """
    x = np.asarray(x, dtype=float)
    rep = psi.rep
    step = h * np.linalg.norm(x, axis=-1) if relative else np.full(x.shape[:-1], h)
    if np.any(step <= 0):
        raise ValueError("finite-difference step must be positive")
    out = np.zeros(x.shape[:-1] + (rep.N,), dtype=complex)
    for j in range(rep.n):
        e = np.zeros(rep.n)
        e[j] = 1
        d = step[..., None] * e
        dj = (psi(x - 2 * d) - 8 * psi(x - d) + 8 * psi(x + d) - psi(x + 2 * d)) / (12 * step[..., None])
        out += np.einsum("ab,...b->...a", -1j * rep.alphas[j], dj)
    return out


def verify_dkelvin(psi: PointSpinorFn, points, h: float = 1e-2) -> float:
    """max |D(psi_K)(x) - |x|^-2 (D psi)_K(x)| with both sides by finite differences."""
    x = np.asarray(points, dtype=float)
    if np.any(np.linalg.norm(x, axis=-1) < 0.1):
        raise ValueError("points must satisfy |x| >= 0.1")
    lhs = dirac_point(kelvin(psi), x, h)
    Dpsi = PointSpinorFn(psi.rep, lambda y: dirac_point(psi, y, h))
    rhs = kelvin(Dpsi)(x) / np.sum(x * x, axis=-1)[..., None]
    return float(np.linalg.norm(lhs - rhs, axis=-1).max())


def _log_panels(lo: float, hi: float, panels: int, order: int):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (b - a) * xg + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * wg).ravel()
    return s, w


def radial_angular_integral(density: Callable[[np.ndarray], np.ndarray], n: int,
                            s_range=(-14.0, 14.0), panels: int = 56, order: int = 12,
                            sphere_m: int | None = None, check: bool = True, rtol: float = 1e-3) -> float:
    """int_{R^n} density(x) dx in coordinates x = e^s omega.

    The two ends are closed by power-law extrapolation of the shell integrals
    q(s) = e^(ns) int density(e^s omega) d omega, i.e. the decay law of the density.
    ``sphere_m`` sets the angular rule (default 64 angles for n = 2, a degree-19
    product rule otherwise).  With ``check`` the result is compared to the rule with half the panels.
    """
    if sphere_m is None:
        sphere_m = 32 if n == 2 else 10
    s, w = _log_panels(*s_range, panels, order)
    om, wo = sphere_rule(n, sphere_m)
    r = np.exp(s)
    pts = r[:, None, None] * om[None]
    d = np.asarray(density(pts), dtype=float)
    q = np.exp(n * s) * (d @ wo)
    total = float(q @ w)

    def end(s1, s2, q1, q2):
        if q1 == 0 or q2 == 0 or np.sign(q1) != np.sign(q2):
            return 0.0
        slope = np.log(abs(q2 / q1)) / (s2 - s1)
        return 0.0 if slope == 0 else abs(q2 / slope) * np.sign(q2)

    # shell integrals at the two edges, extrapolated as exponentials in s
    lo = s_range[0]
    hi = s_range[1]
    qe = [np.exp(n * t) * (np.asarray(density(np.exp(t) * om), dtype=float) @ wo)
          for t in (lo, lo + 0.5, hi - 0.5, hi)]
    total += end(lo + 0.5, lo, qe[1], qe[0]) + end(hi - 0.5, hi, qe[2], qe[3])
    if check:
        coarse = radial_angular_integral(density, n, s_range, panels // 2, order, sphere_m, check=False)
        if abs(coarse - total) > rtol * max(abs(total), 1e-300):
            raise QuadratureError(f"radial-angular quadrature unresolved: {total:.8g} vs {coarse:.8g}")
    return total


def verify_norm_identities(psi: PointSpinorFn, h: float = 1e-3, **quad) -> tuple[float, float]:
    """Relative differences (D_2#, D_quad) between the integrals for psi and psi_K.

    D_2# compares int |psi|^(2#); D_quad compares int <psi, D psi>.
    """
    n = psi.rep.n
    q = 2 * n / (n - 1)
    psik = kelvin(psi)

    def norm_density(f):
        return lambda x: np.linalg.norm(f(x), axis=-1) ** q

    def quad_density(f):
        return lambda x: np.real(np.sum(np.conj(f(x)) * dirac_point(f, x, h, relative=True), axis=-1))

    out = []
    for dens in (norm_density, quad_density):
        a = radial_angular_integral(dens(psi), n, **quad)
        b = radial_angular_integral(dens(psik), n, **quad)
        out.append(abs(a - b) / max(abs(a), abs(b), 1e-300))
    return out[0], out[1]


def green_gamma(rep: CliffordRep, z) -> np.ndarray:
    """Gamma(z) = (i/|S^(n-1)|) alpha . z / |z|^n, shape (..., N, N)."""
    z = np.asarray(z, dtype=float)
    r = np.linalg.norm(z, axis=-1)
    if np.any(r == 0):
        raise ValueError("Gamma is singular at z = 0")
    c = 1j / sphere_area(rep.n - 1)
    return c * rep.alpha_dot(z) / (r ** rep.n)[..., None, None]


def green_convolve(F: PointSpinorFn, x, delta: float = 0.1, R: float = 40.0,
                   inner_order: int = 16, panels: int = 24, order: int = 32,
                   sphere_m: int = 64, tail_exponent: float | None = None) -> np.ndarray:
    """(Gamma * F)(x) for a decaying field F, at points x (k, n).

    In polar coordinates around x, y = x - rho omega, the kernel singularity
    cancels the Jacobian and

        (Gamma * F)(x) = (i/|S^(n-1)|) int_0^inf d rho int d omega (alpha . omega) F(x - rho omega).

    The rho-integral is split into [0, delta] (Gauss-Legendre), [delta, R]
    (Gauss-Legendre panels uniform in log rho) and an analytic tail assuming the
    shell integrand decays like rho^-p, p = ``tail_exponent`` (default n + 1,
    the rate for F ~ |y|^-(n+1)).
    """
    rep = F.rep
    n = rep.n
    x = np.atleast_2d(np.asarray(x, dtype=float))
    p = n + 1 if tail_exponent is None else tail_exponent
    xg, wg = np.polynomial.legendre.leggauss(inner_order)
    rho_in = 0.5 * delta * (xg + 1)
    w_in = 0.5 * delta * wg
    s, ws = _log_panels(np.log(delta), np.log(R), panels, order)
    rho = np.r_[rho_in, np.exp(s), R]
    wr = np.r_[w_in, ws * np.exp(s), 0.0]
    om, wo = sphere_rule(n, sphere_m)
    A = np.einsum("mj,jab->mab", om, rep.alphas)  # (M, N, N)
    c = 1j / sphere_area(n - 1)
    out = np.zeros((len(x), rep.N), dtype=complex)
    for i, xi in enumerate(x):
        y = xi[None, None, :] - rho[:, None, None] * om[None, :, :]
        vals = F(y)  # (R, M, N)
        shell = c * np.einsum("m,mab,rmb->ra", wo, A, vals)
        out[i] = wr @ shell + shell[-1] * R / (p - 1)
    return out


def verify_integral_equation(psi: PointSpinorFn, params: ModelParams, points, **kw) -> float:
    """max |psi(x) - (Gamma * (h(psi) psi))(x)| at the given points."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if np.any(np.linalg.norm(x, axis=-1) > 3):
        raise ValueError("evaluation points must satisfy |x| <= 3")
    F = PointSpinorFn(psi.rep, lambda y: apply_nonlinearity(params, psi(y)))
    conv = green_convolve(F, x, **kw)
    return float(np.linalg.norm(psi(x) - conv, axis=-1).max())


def verify_green_identity(phi: PointSpinorFn, points, h: float = 1e-3, **kw) -> float:
    """max |phi(x) - (Gamma * D phi)(x)| for a rapidly decaying smooth phi."""
    Dphi = PointSpinorFn(phi.rep, lambda y: dirac_point(phi, y, h))
    conv = green_convolve(Dphi, points, tail_exponent=kw.pop("tail_exponent", 50.0), **kw)
    return float(np.linalg.norm(phi(np.atleast_2d(points)) - conv, axis=-1).max())
