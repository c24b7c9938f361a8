"""Decay exponents, the leading spinor Psi and first-order coefficients Phi_j.

A finite-energy solution behaves at infinity like

    psi(x) ~ |x|^(1-n) U(x) Psi + |x|^(-n) sum_j (x_j/|x|) U(x) Phi_j,

with Psi = psi_K(0) and Phi_j = d_j psi_K(0) for the Kelvin transform psi_K.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import inversion_matrix
from .kelvin_green import PointSpinorFn
from .sphere import lebedev26, sphere_rule

__all__ = ["AsymptoticFit", "LeadingSpinor", "SubleadingFit", "FitError", "fit_power",
           "averaging_rule", "extract_leading_spinor", "leading_decay", "fit_subleading"]

DEFAULT_WINDOW = (1e2, 1e3)


class FitError(ValueError):
    """Invalid data for a fit or an ill-conditioned fit."""


@dataclass(frozen=True)
class AsymptoticFit:
    """w(r) ~ c r^-p on the window."""

    exponent: float
    coefficient: float
    window: tuple[float, float]
    fit_residual: float
    n_samples: int


def fit_power(rs, ws, window=DEFAULT_WINDOW, min_samples: int = 20) -> AsymptoticFit:
    """Least-squares line through (log r, log w) for samples inside ``window``."""
    rs, ws = np.asarray(rs, dtype=float), np.asarray(ws, dtype=float)
    r1, r2 = window
    if not (r2 > r1 > 0):
        raise FitError("window must satisfy 0 < R1 < R2")
    sel = (rs >= r1 * (1 - 1e-12)) & (rs <= r2 * (1 + 1e-12))
    if sel.sum() < min_samples:
        raise FitError(f"only {sel.sum()} samples in window, need {min_samples}")
    if np.any(~(ws[sel] > 0)):
        raise FitError("values must be positive inside the window")
    x, y = np.log(rs[sel]), np.log(ws[sel])
    A = np.c_[x, np.ones_like(x)]
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = float(np.sqrt(np.mean((A @ [slope, icpt] - y) ** 2)))
    return AsymptoticFit(float(-slope), float(np.exp(icpt)), (float(r1), float(r2)), res, int(sel.sum()))


def averaging_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Averaging rule on S^(n-1) with weights summing to 1: 64 angles (n=2), 26 points (n=3)."""
    if n == 2:
        pts, w = sphere_rule(2, 32)
    elif n == 3:
        pts, w = lebedev26()
    else:
        pts, w = sphere_rule(n, 6)
    return pts, w / w.sum()


@dataclass(frozen=True)
class LeadingSpinor:
    """Angular averages of |x|^(n-1) U(x) psi(x) at R and 2R."""

    Psi: np.ndarray
    radius: float
    Psi_2R: np.ndarray
    magnitude: float
    stable: bool

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.Psi))

    @property
    def drift(self) -> float:
        return float(np.linalg.norm(self.Psi - self.Psi_2R))


def _sphere_average(psi: PointSpinorFn, R: float, rule):
    pts, w = rule
    x = R * pts
    vals = psi(x)
    n = psi.rep.n
    unwound = R ** (n - 1) * np.einsum("mab,mb->ma", inversion_matrix(psi.rep, x), vals)
    avg = w @ unwound
    mag = float(np.sqrt(w @ (R ** (n - 1) * np.linalg.norm(vals, axis=-1)) ** 2))
    return avg, mag


def extract_leading_spinor(psi: PointSpinorFn, R: float, rule=None, rtol: float = 1e-2) -> LeadingSpinor:
    """Estimate Psi as the average over |x| = R of |x|^(n-1) U(x) psi(x).

    ``magnitude`` is the RMS of |x|^(n-1)|psi| over the sphere; when Psi = 0 it
    measures how fast the estimate goes to zero.  ``stable`` requires Psi to
    agree between R and 2R and the magnitude not to grow.
    """
    if not R >= 10:
        raise ValueError("R must be >= 10")
    rule = averaging_rule(psi.rep.n) if rule is None else rule
    a, mag = _sphere_average(psi, R, rule)
    b, mag2 = _sphere_average(psi, 2 * R, rule)
    scale = max(np.linalg.norm(a), mag)
    stable = bool(np.linalg.norm(a - b) <= rtol * scale and mag2 <= mag * (1 + rtol)) if scale > 0 else True
    return LeadingSpinor(a, float(R), b, mag, stable)


def leading_decay(psi: PointSpinorFn, radii=None, window=DEFAULT_WINDOW) -> AsymptoticFit:
    """Power-law fit to the magnitude of the leading-order estimate over a range of R."""
    radii = np.geomspace(*window, 24) if radii is None else np.asarray(radii)
    rule = averaging_rule(psi.rep.n)
    mags = np.array([_sphere_average(psi, R, rule)[1] for R in radii])
    return fit_power(radii, mags, window)


@dataclass(frozen=True)
class SubleadingFit:
    Phi: np.ndarray          # (n, N)
    Psi: np.ndarray
    condition: float
    residual: float
    radii: np.ndarray


def fit_subleading(psi: PointSpinorFn, radii=None, Psi=None, rule=None,
                   max_condition: float = 1e6) -> SubleadingFit:
    """First-order coefficients Phi_j of the expansion about infinity.

    At each radius R the quantity |x|^n U(x) psi(x) - |x| Psi is fitted by least
    squares against the basis {1, x_1/|x|, ..., x_n/|x|} on the sphere; the
    Phi_j(R) are then extrapolated to R = infinity by a quadratic in 1/R.
    """
    n, N = psi.rep.n, psi.rep.N
    radii = np.geomspace(50, 400, 8) if radii is None else np.asarray(radii, dtype=float)
    if Psi is None:
        lead = extract_leading_spinor(psi, float(radii[-1]))
        if not lead.stable:
            raise FitError("leading spinor is not stable; Phi is undefined")
        Psi = lead.Psi
    Psi = np.asarray(Psi, dtype=complex)
    if rule is None:
        rule = sphere_rule(n, 16)
    pts, w = rule
    basis = np.c_[np.ones(len(pts)), pts]
    sw = np.sqrt(w / w.sum())
    B = basis * sw[:, None]
    cond = float(np.linalg.cond(B))
    if cond > max_condition:
        raise FitError(f"angular system ill-conditioned (cond {cond:.3g})")
    Phis, res = [], 0.0
    for R in radii:
        x = R * pts
        y = R ** n * np.einsum("mab,mb->ma", inversion_matrix(psi.rep, x), psi(x)) - R * Psi
        coef, *_ = np.linalg.lstsq(B, y * sw[:, None], rcond=None)
        res = max(res, float(np.linalg.norm(B @ coef - y * sw[:, None])))
        Phis.append(coef[1:])
    Phis = np.array(Phis)  # (R, n, N)
    A = np.c_[np.ones(len(radii)), 1 / radii, 1 / radii ** 2]
    flat = Phis.reshape(len(radii), -1)
    sol, *_ = np.linalg.lstsq(A, flat, rcond=None)
    Phi = sol[0].reshape(n, N)
    return SubleadingFit(Phi, Psi, cond, res, radii)
