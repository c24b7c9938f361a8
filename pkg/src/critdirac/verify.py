"""Composite verification suite behind ``verify-all``.

Each function adds named metrics and checks to a report.  ``quick`` lowers the
resolution where a check is expensive; thresholds stay the same unless noted.
"""
from __future__ import annotations

import warnings

import numpy as np

from .asymptotics import extract_leading_spinor, leading_decay
from .clifford import build_rep, verify_rep
from .closed_form import (action_value, excited_explicit, excited_spinor, ground_state_radial,
                          ground_state_spinor)
from .field import GridSpec, TruncationWarning, action, pde_residual, sample
from .kelvin_green import PointSpinorFn, verify_dkelvin, verify_integral_equation, verify_norm_identities
from .params import GroundState
from .radial import LogState, ground_log_orbit, integrate, radial_residual, rho_closed_form
from .report import Report
from .shooting import shoot


def random_test_spinor(rep, seed: int = 0):
    """Gaussian-enveloped spinor with random quadratic polynomial coefficients."""
    rng = np.random.default_rng(seed)
    C = rng.normal(size=(3, rep.N)) + 1j * rng.normal(size=(3, rep.N))
    B = rng.normal(size=(rep.N, rep.n))

    def fn(y):
        p = y @ B.T
        return np.exp(-0.5 * np.sum(y * y, axis=-1))[..., None] * (C[0] + p * C[1] + p * p * C[2])

    return PointSpinorFn(rep, fn)


def random_points(n: int, k: int, seed: int = 0, rmin: float = 0.3, rmax: float = 2.0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(k, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.uniform(rmin, rmax, size=(k, 1))


def check_clifford(rep: Report, quick: bool = False) -> None:
    worst = max(max(verify_rep(build_rep(n)).values()) for n in range(2, 9))
    rep.metrics["clifford_max_residual"] = worst
    rep.check("clifford_identities", worst, 1e-14)


def check_closed_forms(rep: Report, quick: bool = False) -> None:
    rs = np.geomspace(1e-2, 1e2, 200)
    worst = 0.0
    pairs = [ground_state_radial(n) for n in (2, 2.5, 3, 4)]
    pairs += [excited_explicit(S) for S in (-3, -2, 0, 1, 2)]
    for P in pairs:
        r1, r2 = radial_residual(P.params, rs, P.u(rs), P.v(rs), P.du(rs), P.dv(rs))
        worst = max(worst, float(np.abs(r1).max()), float(np.abs(r2).max()))
    rep.metrics["closed_form_residual"] = worst
    rep.check("closed_form_residual", worst, 1e-12)


def ground_action(lam: float, m: int = 241) -> float:
    r2 = build_rep(2)
    F = sample(r2, GridSpec(2, -6, 6, m), lambda x: ground_state_spinor(r2, lam, x=x))
    tail = ground_state_radial(2, lam).profile(np.geomspace(5.9, 1e4, 20000))
    return action(F, GroundState(2), tail=tail)


def check_action(rep: Report, quick: bool = False) -> None:
    lams = (1.0,) if quick else (0.5, 1.0, 2.0)
    errs = [abs(ground_action(lam, 121 if quick else 241) - action_value(2)) for lam in lams]
    rep.metrics["action_error"] = max(errs)
    rep.check("action_error", max(errs), 1e-3)


def ground_orbit_errors(n: float, T: float = 12.0, tol: float = 1e-10):
    """(sup rho error, energy drift) of the E = 0 orbit integrated from its midpoint."""
    f0, g0 = ground_log_orbit(n, 0.0, 0.0)
    p = GroundState(n)
    err, drift = 0.0, 0.0
    for t1 in (T, -T):
        tr = integrate(p, LogState(0.0, float(f0), float(g0)), t1, tol=tol)
        rho = tr.fs ** 2 + tr.gs ** 2
        err = max(err, float(np.abs(rho - rho_closed_form(n, 0.0, tr.ts)).max()))
        drift = max(drift, tr.drift)
    return err, drift


def check_ground_orbits(rep: Report, quick: bool = False) -> None:
    res = [ground_orbit_errors(n) for n in ((2,) if quick else (2, 2.5, 3))]
    rep.metrics["rho_error"] = max(r[0] for r in res)
    rep.metrics["ground_energy_drift"] = max(r[1] for r in res)
    rep.check("rho_error", rep.metrics["rho_error"], 1e-8)
    rep.check("ground_energy_drift", rep.metrics["ground_energy_drift"], 1e-7)


def explicit_shoot_error(S: int = 1, T: float = 8.0):
    r = shoot(1.0, 0.5, S)
    P = excited_explicit(S)
    ts, sel = r.ts, np.abs(r.ts) <= T
    rr = np.exp(ts[sel])
    err = max(float(np.abs(r.fs[sel] - np.sqrt(rr) * P.u(rr)).max()),
              float(np.abs(r.gs[sel] - np.sqrt(rr) * P.v(rr)).max()))
    return err, r


def check_shoot_explicit(rep: Report, quick: bool = False) -> None:
    err, r = explicit_shoot_error()
    rep.metrics["shoot_explicit_error"] = err
    rep.metrics["shoot_ell"] = r.ell.value
    rep.check("shoot_explicit_error", err, 1e-6)
    rep.check("shoot_ell_error", abs(r.ell.value - np.sqrt(6)), 1e-4)


def check_shoot_generic(rep: Report, quick: bool = False) -> None:
    refl, rate, cub = 0.0, 0.0, 0.0
    for b1, b2, S in ((2.0, 0.3, 1), (0.7, 1.1, -2)):
        r = shoot(b1, b2, S)
        k = abs(S + 0.5)
        refl = max(refl, r.reflection_residual)
        rate = max(rate, abs(r.decay_rate_forward / k - 1), abs(r.decay_rate_backward / k - 1))
        cub = max(cub, abs(r.cubic.value / r.cubic_prediction - 1))
    rep.metrics.update(reflection_residual=refl, decay_rate_rel_error=rate, cubic_rel_error=cub)
    rep.check("reflection_residual", refl, 1e-8)
    rep.check("decay_rate_rel_error", rate, 1e-2)
    rep.check("cubic_rel_error", cub, 1e-2)


def ground_pde_residual(m: int) -> float:
    r2 = build_rep(2)
    F = sample(r2, GridSpec(2, -6, 6, m), lambda x: ground_state_spinor(r2, 1.0, x=x))
    return pde_residual(F, GroundState(2))


def check_pde(rep: Report, quick: bool = False) -> None:
    m = 121 if quick else 241
    coarse, fine = ground_pde_residual(m), ground_pde_residual(2 * m - 1)
    order = float(np.log2(coarse / fine))
    rep.metrics.update(pde_residual=fine if quick else coarse, pde_order=order)
    rep.check("pde_residual", fine if quick else coarse, 1e-3)
    rep.check("pde_order_low", order, 3.8, ">=")
    rep.check("pde_order_high", order, 4.2, "<=")


def dkelvin_ratio(n: int, seed: int = 0, k: int = 20) -> float:
    r = build_rep(n)
    psi = random_test_spinor(r, seed)
    pts = random_points(n, k, seed + 1)
    return verify_dkelvin(psi, pts, 1e-2) / verify_dkelvin(psi, pts, 5e-3)


def ground_norm_identities(n: int, lam: float = 2.0):
    r = build_rep(n)
    psi = PointSpinorFn(r, lambda x: ground_state_spinor(r, lam, x=x))
    # an s-range that is not symmetric, so inversion does not map nodes onto nodes
    return verify_norm_identities(psi, s_range=(-13.3, 14.1))


def check_kelvin(rep: Report, quick: bool = False) -> None:
    ratios = [dkelvin_ratio(n) for n in (2, 3)]
    rep.metrics["dkelvin_ratios"] = ratios
    rep.check("dkelvin_ratio_low", min(ratios), 12.0, ">=")
    rep.check("dkelvin_ratio_high", max(ratios), 20.0, "<=")
    worst = max(max(ground_norm_identities(n)) for n in ((2,) if quick else (2, 3)))
    rep.metrics["kelvin_norm_rel_diff"] = worst
    rep.check("kelvin_norm_rel_diff", worst, 5e-3)


def ground_integral_equation(k: int = 5, seed: int = 0, **kw) -> float:
    r2 = build_rep(2)
    psi = PointSpinorFn(r2, lambda x: ground_state_spinor(r2, 1.0, x=x))
    pts = np.random.default_rng(seed).uniform(-2, 2, size=(k, 2))
    return verify_integral_equation(psi, GroundState(2), pts, **kw)


def check_integral_equation(rep: Report, quick: bool = False) -> None:
    res = ground_integral_equation(2 if quick else 5, **({"order": 16} if quick else {}))
    rep.metrics["integral_equation_residual"] = res
    rep.check("integral_equation_residual", res, 1e-2)


def dichotomy():
    r2 = build_rep(2)
    gs = PointSpinorFn(r2, lambda x: ground_state_spinor(r2, 1.0, x=x))
    ex = PointSpinorFn(r2, lambda x: excited_spinor(1, x=x))
    return extract_leading_spinor(gs, 1e3), leading_decay(ex)


def check_dichotomy(rep: Report, quick: bool = False) -> None:
    lead, fit = dichotomy()
    rep.metrics.update(ground_Psi_norm=lead.norm, excited_leading_rate=fit.exponent)
    rep.check("ground_Psi_error", abs(lead.norm - np.sqrt(2)), 1e-3)
    rep.check("excited_rate_error", abs(fit.exponent - 1), 5e-2)


SUITE = (check_clifford, check_closed_forms, check_action, check_ground_orbits, check_shoot_explicit,
         check_shoot_generic, check_pde, check_kelvin, check_integral_equation, check_dichotomy)


def run_all(report: Report, quick: bool = False) -> Report:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for fn in SUITE:
            fn(report, quick)
    return report
