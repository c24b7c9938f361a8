"""Shooting for excited states of the planar model.

The excited state is the homoclinic orbit of the log-variable system through
the point (a, tau a) on the energy-zero set.  Integrating forward and backward
from there gives the two halves of the orbit; the reflection
g(t) = tau f(-t) relates them.

The orbit leaves along the stable manifold of a saddle, so any energy error
delta eventually drives the fast component away from its true decay; the
usable horizon is where the amplitude is still well above sqrt(delta/|k|).
Integration therefore stops at an amplitude floor rather than at a fixed t.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import Graphene2D
from .radial import LogState, LogTrajectory, energy, integrate

__all__ = ["ShootReport", "LimitEstimate", "DecayError", "shoot", "end_limits",
           "reflect", "reflection_residual", "decay_rate", "scale_profile_pair"]

DEFAULT_TOL = 1e-13
DEFAULT_FLOOR = 1e-6
MAX_HORIZON = 60.0


class DecayError(RuntimeError):
    """The shot trajectory did not decay to the amplitude floor."""


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    spread: float
    window: tuple[float, float]


@dataclass(frozen=True, eq=False)
class ShootReport:
    """Both halves of the shot orbit and the quantities extracted from them."""

    params: Graphene2D
    a: float
    tau: int
    forward: LogTrajectory
    backward: LogTrajectory
    ell: LimitEstimate
    ell_prime: LimitEstimate
    cubic: LimitEstimate
    decay_rate_forward: float
    decay_rate_backward: float
    reflection_residual: float
    energy_drift: float
    meta: dict = field(default_factory=dict)

    @property
    def cubic_prediction(self) -> float:
        """b1 ell^3 / (2(2S+1)), the limit of e^(3kt) g along the decaying end."""
        p = self.params
        return p.beta1 * self.ell.value ** 3 / (2 * (2 * p.S + 1))

    @property
    def ts(self) -> np.ndarray:
        return np.r_[self.backward.ts[:-1], self.forward.ts]

    @property
    def fs(self) -> np.ndarray:
        return np.r_[self.backward.fs[:-1], self.forward.fs]

    @property
    def gs(self) -> np.ndarray:
        return np.r_[self.backward.gs[:-1], self.forward.gs]

    def resolved(self, traj: LogTrajectory, factor: float = 0.1) -> np.ndarray:
        """Samples on which the energy error cannot yet dominate the fast component.

        The fast component is trusted while |E| / |grad E| < factor * min(|f|, |g|).
        """
        p = self.params
        f, g = traj.fs, traj.gs
        df = -(p.k * g - f * (p.beta1 * f * f + 2 * p.beta2 * g * g))
        dg = -p.k * f + g * (2 * p.beta2 * f * f + p.beta1 * g * g)
        grad = np.hypot(-df, dg)
        with np.errstate(divide="ignore", invalid="ignore"):
            shift = np.abs(traj.energies) / grad
        shift = np.maximum(shift, self.energy_drift / np.maximum(grad, 1e-300))
        return shift < factor * np.minimum(np.abs(f), np.abs(g))


def reflect(traj: LogTrajectory, tau: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The reflection (t, f, g) -> (-t, tau g, tau f), returned with increasing t."""
    return -traj.ts[::-1], tau * traj.gs[::-1], tau * traj.fs[::-1]


def _window_mean(ts, ys, lo, hi) -> LimitEstimate:
    sel = (ts >= lo) & (ts <= hi)
    if sel.sum() < 5:
        raise DecayError(f"too few samples in the limit window [{lo:.3g}, {hi:.3g}]")
    y = ys[sel]
    mean = float(np.mean(y))
    spread = float((y.max() - y.min()) / max(abs(mean), 1e-300))
    return LimitEstimate(mean, spread, (float(lo), float(hi)))


def end_limits(ts, fs, gs, k: float, tau: int, contamination: float,
               spread_tol: float = 1e-3) -> tuple[LimitEstimate, LimitEstimate]:
    """Limits of e^(kt) f and e^(3kt) g as t -> tau * infinity.

    ``ts`` must reach far into the decaying end (|t| large with sign tau).  The
    first limit is averaged over the last unit; the second uses a unit window
    centred where the O(e^(-4|k||t|)) corrections balance the amplification
    ``contamination * e^(4|k||t|)`` of the fast-component error.
    """
    s = tau * np.asarray(ts)          # s -> +infinity at the decaying end
    kk = abs(k)
    s_end = float(s.max())
    ell = _window_mean(s, np.exp(k * np.asarray(ts)) * fs, s_end - 1.0, s_end)
    if ell.spread > spread_tol:
        raise DecayError(f"e^(kt) f has not converged (spread {ell.spread:.2e})")
    eps = max(contamination, 1e-16)
    centre = np.log(1 / eps) / (8 * kk)
    centre = float(np.clip(centre, 1.0, s_end - 0.5))
    cub = _window_mean(s, np.exp(3 * k * np.asarray(ts)) * gs, centre - 0.5, centre + 0.5)
    return ell, cub


def decay_rate(traj: LogTrajectory, max_residual: float = 1e-2) -> float:
    """Least-squares slope of -log sqrt(f^2+g^2) against |t| over the last third."""
    t = np.abs(traj.ts)
    amp = traj.amplitude
    t_max = t.max()
    sel = t >= (2 / 3) * t_max
    if sel.sum() < 10:
        raise DecayError("too few samples for the decay-rate fit")
    A = np.c_[t[sel], np.ones(sel.sum())]
    y = np.log(amp[sel])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    if resid > max_residual:
        raise DecayError(f"decay-rate fit residual {resid:.3g} exceeds {max_residual}")
    return float(-coef[0])


def reflection_residual(forward: LogTrajectory, backward: LogTrajectory, tau: int) -> float:
    """sup |g(t) - tau f(-t)| over the common range, using the Hermite interpolant."""
    T = min(forward.ts[-1], -backward.ts[0])
    tf = forward.ts[forward.ts <= T]
    # g(t) for t >= 0 against f(-t) on the backward half, and vice versa
    fb, gb = backward.interpolate(-tf)
    r1 = np.abs(forward.gs[: len(tf)] - tau * fb)
    r2 = np.abs(gb - tau * forward.fs[: len(tf)])
    return float(max(r1.max(), r2.max()))


def shoot(beta1: float, beta2: float, S: int, tol: float = DEFAULT_TOL,
          horizon: float | None = None, floor: float = DEFAULT_FLOOR,
          samples_per_unit: int = 20, atol: float | None = None) -> ShootReport:
    """Shoot the excited S-state from (a, tau a) in both directions.

    Parameters
    ----------
    beta1, beta2 : float
        Model parameters, beta1 > 0 and beta2 >= 0.
    S : int
        Angular momentum.  Non-integer S (in particular S = -1/2) is rejected.
    tol : float
        Relative tolerance of the integrator.
    horizon : float, optional
        Upper bound on |t|.  Integration always stops once the amplitude falls
        below ``floor * a``; if it has not done so by the horizon a
        :class:`DecayError` is raised.
    floor : float
        Stopping amplitude relative to the starting amplitude ``a``.  The
        system is invariant under (f, g, beta) -> (c f, c g, beta / c^2), and
        so are the relative floor and the relative energy error.
    """
    if isinstance(S, float) and not float(S).is_integer():
        raise ValueError(f"S must be an integer (S = {S} has no shooting data)")
    p = Graphene2D(beta1, beta2, S)
    a, tau = p.a, p.tau
    e0 = energy(p, a, tau * a)
    if abs(e0) > 1e-14 * max(1.0, a ** 4):
        raise RuntimeError(f"starting point is off the energy-zero set (E = {e0:.3e})")
    T = MAX_HORIZON if horizon is None else float(horizon)
    if atol is None:
        atol = tol * 1e-3
    start = LogState(0.0, a, tau * a)
    atol = atol * a
    fwd = integrate(p, start, T, tol=tol, atol=atol, samples_per_unit=samples_per_unit,
                    stop_below=floor * a)
    bwd = integrate(p, start, -T, tol=tol, atol=atol, samples_per_unit=samples_per_unit,
                    stop_below=floor * a)
    for name, tr in (("forward", fwd), ("backward", bwd)):
        if not tr.terminated:
            raise DecayError(f"{name} half did not reach amplitude {floor * a:g} within |t| <= {T:g}")
        if not tr.trusted:
            raise DecayError(f"{name} half has energy drift {tr.drift:.3e}")
    drift = max(fwd.drift, bwd.drift)

    decaying = fwd if tau > 0 else bwd
    other = bwd if tau > 0 else fwd
    contamination = max(drift / a ** 2, tol)
    ell, cubic = end_limits(decaying.ts, decaying.fs, decaying.gs, p.k, tau, contamination)
    # the other end is the same limit after the reflection map
    rt, rf, rg = reflect(other, tau)
    ell_r, _ = end_limits(rt, rf, rg, p.k, tau, contamination)
    ell_prime = LimitEstimate(tau * ell_r.value, ell_r.spread, ell_r.window)

    return ShootReport(
        params=p, a=a, tau=tau, forward=fwd, backward=bwd, ell=ell, ell_prime=ell_prime,
        cubic=cubic, decay_rate_forward=decay_rate(fwd), decay_rate_backward=decay_rate(bwd),
        reflection_residual=reflection_residual(fwd, bwd, tau), energy_drift=drift,
        meta={"tol": tol, "floor": floor, "horizon": T},
    )


def scale_profile_pair(rs, us, vs, lam: float, sigma: int = 1, weight: float = 0.5):
    """Scaling family (r, u, v) -> (lam r, sigma lam^-w u, sigma lam^-w v)."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    c = sigma * lam ** -weight
    return lam * np.asarray(rs), c * np.asarray(us), c * np.asarray(vs)
