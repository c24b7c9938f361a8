"""Radial reduction in logarithmic variables.

With r = e^t and u = r^-e f(t), v = r^-e g(t) (e = (n-1)/2 for the ground-state
model, 1/2 for the planar model) the radial systems become autonomous planar
Hamiltonian systems.  Their energy is conserved along trajectories.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .params import GroundState, Graphene2D, ModelParams, RadialProfile

__all__ = [
    "LogState", "LogTrajectory", "IntegrationError", "vector_field", "energy",
    "energy_gradient", "hamiltonian_factor", "integrate", "radial_residual", "ground_log_orbit",
    "rho_closed_form", "sigma_ode_residual", "theta", "theta_derivative",
    "theta_rate", "to_profile", "from_profile",
]


class IntegrationError(RuntimeError):
    """The integrator could not continue (step-size underflow or non-finite state)."""


@dataclass(frozen=True)
class LogState:
    t: float
    f: float
    g: float


def vector_field(params: ModelParams, f, g):
    """(f', g') at (f, g); works elementwise on arrays."""
    if isinstance(params, Graphene2D):
        b1, b2, k = params.beta1, params.beta2, params.k
        df = -k * f + g * (2 * b2 * f * f + b1 * g * g)
        dg = k * g - f * (b1 * f * f + 2 * b2 * g * g)
        return df, dg
    n = params.n
    e = (n - 1) / 2
    s = (f * f + g * g) ** (1 / (n - 1))
    return -e * f + g * s, e * g - f * s


def energy(params: ModelParams, f, g):
    """Conserved energy E(f, g)."""
    if isinstance(params, Graphene2D):
        b1, b2, k = params.beta1, params.beta2, params.k
        f2, g2 = f * f, g * g
        return 0.25 * b1 * (f2 * f2 + g2 * g2) + b2 * f2 * g2 - k * f * g
    n = params.n
    return -f * g + (f * f + g * g) ** (n / (n - 1)) / n


def hamiltonian_factor(params: ModelParams) -> float:
    """c with f' = c dE/dg, g' = -c dE/df: 1 for the planar model, (n-1)/2 otherwise."""
    return 1.0 if isinstance(params, Graphene2D) else (params.n - 1) / 2


def energy_gradient(params: ModelParams, f, g):
    """(dE/df, dE/dg), obtained from the vector field through the Hamiltonian form."""
    df, dg = vector_field(params, f, g)
    c = hamiltonian_factor(params)
    return -dg / c, df / c


@dataclass(frozen=True, eq=False)
class LogTrajectory:
    """Samples of a trajectory, ordered by increasing t."""

    params: ModelParams
    ts: np.ndarray
    fs: np.ndarray
    gs: np.ndarray
    energies: np.ndarray
    tol: float
    trusted: bool
    direction: int = 1
    terminated: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def drift(self) -> float:
        """max |E(t) - E(t_start)|, t_start being the initial point of the integration."""
        e0 = self.energies[0] if self.direction > 0 else self.energies[-1]
        return float(np.max(np.abs(self.energies - e0)))

    @property
    def amplitude(self) -> np.ndarray:
        return np.hypot(self.fs, self.gs)

    def interpolate(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Cubic Hermite interpolation using the vector field for the slopes."""
        df, dg = vector_field(self.params, self.fs, self.gs)
        t = np.asarray(t, dtype=float)
        lo, hi = self.ts[0], self.ts[-1]
        if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
            raise ValueError(f"t outside the sampled range [{lo}, {hi}]")
        return (CubicHermiteSpline(self.ts, self.fs, df)(t),
                CubicHermiteSpline(self.ts, self.gs, dg)(t))

    def __len__(self):
        return len(self.ts)


def integrate(params: ModelParams, start: LogState, t_end: float, tol: float = 1e-10,
              atol: float | None = None, samples_per_unit: int = 20,
              stop_below: float | None = None, max_drift_factor: float = 1e3) -> LogTrajectory:
    """Integrate the log-variable system from ``start`` to ``t_end`` (either direction).

    Uses the Dormand-Prince 5(4) pair with its native dense output, sampled at
    ``samples_per_unit`` points per unit of t.  When ``stop_below`` is given the
    integration stops as soon as sqrt(f^2 + g^2) falls below it.  The result is
    flagged untrusted when the energy drift exceeds ``max_drift_factor * tol``.
    """
    if not (tol > 0 and np.isfinite(tol)):
        raise ValueError("tol must be positive")
    if samples_per_unit < 10:
        raise ValueError("need at least 10 samples per unit")
    if atol is None:
        atol = tol * 1e-2
    span = float(t_end - start.t)
    direction = 1 if span >= 0 else -1
    length = abs(span)
    n_samples = max(2, int(np.ceil(length * samples_per_unit)) + 1)
    s_eval = np.linspace(0.0, length, n_samples)

    # integrate in s = direction * (t - t0) >= 0 so that both directions share the code
    def rhs(_s, y):
        df, dg = vector_field(params, y[0], y[1])
        return [direction * df, direction * dg]

    events = None
    if stop_below is not None:
        def small(_s, y):
            return np.hypot(y[0], y[1]) - stop_below
        small.terminal = True
        small.direction = -1
        events = [small]

    if length == 0:
        ss, ys = np.array([0.0]), np.array([[start.f], [start.g]])
        status = 0
    else:
        sol = solve_ivp(rhs, (0.0, length), [start.f, start.g], method="RK45",
                        t_eval=s_eval, rtol=tol, atol=atol, events=events)
        if sol.status == -1:
            where = start.t + direction * sol.t[-1] if len(sol.t) else start.t
            raise IntegrationError(f"integration failed near t = {where:.6g}: {sol.message}")
        ss, ys, status = sol.t, sol.y, sol.status
        if status == 1 and len(sol.t_events[0]):
            se = sol.t_events[0][0]
            if len(ss) == 0 or ss[-1] < se:
                ss = np.r_[ss, se]
                ys = np.c_[ys, sol.y_events[0][0]]
    if not np.all(np.isfinite(ys)):
        raise IntegrationError("non-finite state encountered")
    ts = start.t + direction * ss
    fs, gs = ys[0].copy(), ys[1].copy()
    if direction < 0:
        ts, fs, gs = ts[::-1].copy(), fs[::-1].copy(), gs[::-1].copy()
    es = energy(params, fs, gs)
    e0 = energy(params, start.f, start.g)
    drift = float(np.max(np.abs(es - e0)))
    trusted = drift <= max_drift_factor * tol * max(1.0, abs(e0))
    for a in (ts, fs, gs, es):
        a.setflags(write=False)
    return LogTrajectory(params, ts, fs, gs, es, tol=tol, trusted=bool(trusted),
                         direction=direction, terminated=(status == 1))


def radial_residual(params: ModelParams, r, u, v, du, dv) -> tuple[np.ndarray, np.ndarray]:
    """Residual of the radial system at points r given (u, v, u', v')."""
    r = np.asarray(r, dtype=float)
    if isinstance(params, Graphene2D):
        b1, b2, S = params.beta1, params.beta2, params.S
        r1 = du + (S + 1) * u / r - v * (b1 * v * v + 2 * b2 * u * u)
        r2 = dv - S * v / r + u * (b1 * u * u + 2 * b2 * v * v)
        return r1, r2
    n = params.n
    s = (u * u + v * v) ** (1 / (n - 1))
    return du + (n - 1) * u / r - v * s, dv + u * s


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2 * ax)) - np.log(2.0)


def ground_log_orbit(n: float, t0: float, t, sigma: int = 1):
    """Closed-form (f, g) of the ground-state orbit centred at t0.

    f = sigma sqrt((n/2)^(n-1)/2) e^((t-t0)/2) cosh^(-n/2)(t-t0), g likewise with e^(-(t-t0)/2).
    """
    x = np.asarray(t, dtype=float) - t0
    logc = 0.5 * ((n - 1) * np.log(n / 2) - np.log(2.0)) - 0.5 * n * _log_cosh(x)
    return sigma * np.exp(logc + x / 2), sigma * np.exp(logc - x / 2)


def rho_closed_form(n: float, t0: float, t):
    """rho = f^2 + g^2 = (n/2)^(n-1) cosh^(-n+1)(t - t0)."""
    x = np.asarray(t, dtype=float) - t0
    return np.exp((n - 1) * np.log(n / 2) - (n - 1) * _log_cosh(x))


def sigma_ode_residual(traj: LogTrajectory, energy_tol: float | None = None) -> float:
    """Residual of s' = 1 - s^2 for s = sign(f^2 - g^2) sqrt(1 - (4/n^2) rho^(2/(n-1))).

    Valid only on the E = 0 level set of the ground-state model; other inputs are
    rejected.  Derivatives are second-order central differences, so the
    residual is O(dt^2).
    """
    p = traj.params
    if not isinstance(p, GroundState):
        raise ValueError("the rho-equation applies to the ground-state model")
    n = p.n
    if energy_tol is None:
        energy_tol = max(1e3 * traj.tol, 1e-12)
    if np.max(np.abs(traj.energies)) > energy_tol:
        raise ValueError("trajectory is not on the E = 0 level set")
    rho = traj.fs ** 2 + traj.gs ** 2
    rmax = (n / 2) ** (n - 1)
    if np.any(rho > rmax * (1 + 1e-9)):
        raise ValueError(f"rho exceeds its maximal value (n/2)^(n-1) = {rmax}")
    sig = np.sqrt(np.clip(1 - (4 / n ** 2) * rho ** (2 / (n - 1)), 0, None))
    sgn = np.where(traj.fs ** 2 - traj.gs ** 2 < 0, -1.0, 1.0)
    s = sgn * sig
    if len(s) < 3:
        raise ValueError("need at least 3 samples")
    ts = traj.ts
    ds = (s[2:] - s[:-2]) / (ts[2:] - ts[:-2])
    return float(np.max(np.abs(ds - (1 - s[1:-1] ** 2))))


def theta(f, g):
    """theta = arctan(g/f); f = 0 is rejected."""
    f = np.asarray(f, dtype=float)
    if np.any(f == 0):
        raise ValueError("theta is undefined where f = 0")
    return np.arctan(np.asarray(g) / f)


def theta_rate(params: ModelParams, f, g):
    """theta' = (f g' - g f') / rho along any trajectory."""
    df, dg = vector_field(params, f, g)
    return (f * dg - g * df) / (f * f + g * g)


def theta_derivative(params: ModelParams, f, g):
    """theta' on the E = 0 set, written without the linear term.

    Planar model: theta' = (-(b1/2)(f^4+g^4) - 2 b2 f^2 g^2) / rho.
    Ground-state model: theta' = -rho^(1/(n-1)) / n.
    """
    f, g = np.asarray(f, dtype=float), np.asarray(g, dtype=float)
    rho = f * f + g * g
    if np.any(rho == 0):
        raise ValueError("theta' is undefined at the origin")
    if isinstance(params, Graphene2D):
        b1, b2 = params.beta1, params.beta2
        return (-0.5 * b1 * (f ** 4 + g ** 4) - 2 * b2 * f * f * g * g) / rho
    return -rho ** (1 / (params.n - 1)) / params.n


def to_profile(traj: LogTrajectory) -> RadialProfile:
    """Map (t, f, g) to (r, u, v) = (e^t, e^(-e t) f, e^(-e t) g)."""
    e = traj.params.weight
    rs = np.exp(traj.ts)
    w = np.exp(-e * traj.ts)
    return RadialProfile(traj.params, rs, w * traj.fs, w * traj.gs, meta={"source": "trajectory"})


def from_profile(profile: RadialProfile) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`to_profile`: returns (t, f, g)."""
    e = profile.params.weight
    ts = np.log(profile.rs)
    w = profile.rs ** e
    return ts, w * profile.us, w * profile.vs
