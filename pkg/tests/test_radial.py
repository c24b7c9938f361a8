import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critdirac.closed_form import excited_explicit, ground_state_radial, singular_solution
from critdirac.params import GroundState, Graphene2D, RadialProfile
from critdirac.radial import (IntegrationError, LogState, energy, energy_gradient, from_profile,
                              ground_log_orbit, integrate, rho_closed_form, sigma_ode_residual,
                              theta, theta_derivative, theta_rate, to_profile, vector_field)


@pytest.mark.parametrize("n", [2, 2.5, 3, 5])
def test_log_orbit_matches_bubble(n):
    # f = r^((n-1)/2) U(r) on the orbit centred at t0 = 0
    t = np.linspace(-6, 6, 31)
    f, g = ground_log_orbit(n, 0.0, t)
    P = ground_state_radial(n)
    r = np.exp(t)
    assert np.allclose(f, r ** ((n - 1) / 2) * P.u(r), rtol=1e-13)
    assert np.allclose(g, r ** ((n - 1) / 2) * P.v(r), rtol=1e-13)
    assert np.allclose(f * f + g * g, rho_closed_form(n, 0.0, t), rtol=1e-13)
    assert np.abs(energy(GroundState(n), f, g)).max() < 1e-14


def test_log_orbit_shift_is_scaling():
    # t0 = ln(lam) corresponds to the lam-bubble
    lam = 3.0
    t = np.linspace(-2, 4, 9)
    f, _ = ground_log_orbit(3, np.log(lam), t)
    P = ground_state_radial(3, lam)
    assert np.allclose(f, np.exp(t) * P.u(np.exp(t)), rtol=1e-13)


def test_rho_no_overflow():
    assert rho_closed_form(3, 0, 800.0) == 0.0 or rho_closed_form(3, 0, 800.0) < 1e-300
    assert np.isfinite(ground_log_orbit(3, 0, np.array([-800.0, 800.0]))[0]).all()


def test_singular_solution_is_fixed_point():
    n = 3
    P = singular_solution(n)
    c = float(P.u(1.0))
    df, dg = vector_field(GroundState(n), c, c)
    assert abs(df) < 1e-15 and abs(dg) < 1e-15
    assert energy(GroundState(n), c, c) < 0


@pytest.mark.parametrize("params", [GroundState(2), GroundState(2.5), GroundState(4),
                                    Graphene2D(1, 0.5, 1), Graphene2D(0.7, 1.1, -2)])
def test_hamiltonian_structure(params):
    rng = np.random.default_rng(3)
    f, g = rng.normal(size=(2, 20))
    ef, eg = energy_gradient(params, f, g)
    eps = 1e-6
    fd_f = (energy(params, f + eps, g) - energy(params, f - eps, g)) / (2 * eps)
    fd_g = (energy(params, f, g + eps) - energy(params, f, g - eps)) / (2 * eps)
    assert np.allclose(ef, fd_f, rtol=1e-7, atol=1e-9)
    assert np.allclose(eg, fd_g, rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("n", [2, 2.5, 3])
def test_integrated_orbit(n):
    f0, g0 = ground_log_orbit(n, 0.0, 0.0)
    p = GroundState(n)
    for T in (12.0, -12.0):
        tr = integrate(p, LogState(0.0, float(f0), float(g0)), T, tol=1e-10)
        assert tr.trusted
        assert tr.drift < 1e-7
        assert np.all(np.diff(tr.ts) > 0)
        rho = tr.fs ** 2 + tr.gs ** 2
        assert np.abs(rho - rho_closed_form(n, 0.0, tr.ts)).max() < 1e-8
        assert len(tr) >= 10 * 12


def test_zero_orbit_is_constant():
    tr = integrate(Graphene2D(1, 0.5, 1), LogState(0, 0.0, 0.0), 5.0)
    assert np.all(tr.fs == 0) and np.all(tr.gs == 0)
    assert tr.drift == 0


def test_zero_length_integration():
    tr = integrate(GroundState(2), LogState(1.0, 0.3, 0.2), 1.0)
    assert len(tr) == 1


def test_bounded_off_level_orbits():
    # the quartic energy is coercive, so orbits off E = 0 stay bounded
    tr = integrate(Graphene2D(1, 0.5, 0), LogState(0, 3.0, -3.0), 10.0)
    assert tr.amplitude.max() < 10 and tr.trusted


def test_step_size_underflow_raises(monkeypatch):
    import critdirac.radial as radial
    monkeypatch.setattr(radial, "vector_field", lambda p, f, g: (f * f, 0.0 * g))
    with pytest.raises(IntegrationError, match="near t"):
        radial.integrate(GroundState(2), LogState(0, 1.0, 0.0), 2.0)


def test_drift_flag():
    f0, g0 = ground_log_orbit(2, 0.0, 0.0)
    tr = integrate(GroundState(2), LogState(0, float(f0), float(g0)), 10, tol=1e-3, atol=1e-3,
                   max_drift_factor=1e-6)
    assert not tr.trusted


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate(GroundState(2), LogState(0, 1, 1), 1, tol=0)
    with pytest.raises(ValueError):
        integrate(GroundState(2), LogState(0, 1, 1), 1, samples_per_unit=5)


def test_interpolation_reproduces_samples_and_orbit():
    f0, g0 = ground_log_orbit(3, 0.0, 0.0)
    tr = integrate(GroundState(3), LogState(0, float(f0), float(g0)), 6, tol=1e-12, atol=1e-14)
    f, g = tr.interpolate(tr.ts)
    assert np.allclose(f, tr.fs, rtol=1e-14, atol=0) and np.allclose(g, tr.gs, rtol=1e-14, atol=1e-20)
    tm = 0.5 * (tr.ts[1:] + tr.ts[:-1])
    fe, ge = ground_log_orbit(3, 0.0, tm)
    fi, gi = tr.interpolate(tm)
    # O(dt^4) interpolation error, dt = 0.05
    assert np.abs(fi - fe).max() < 1e-6 and np.abs(gi - ge).max() < 1e-6
    with pytest.raises(ValueError):
        tr.interpolate(7.0)


@pytest.mark.parametrize("n", [2, 3])
def test_sigma_ode(n):
    f0, g0 = ground_log_orbit(n, 0.0, 0.0)
    p = GroundState(n)
    res = []
    for spu in (20, 40):
        tr = integrate(p, LogState(-8, *map(float, ground_log_orbit(n, 0.0, -8.0))), 8, tol=1e-12,
                       atol=1e-14, samples_per_unit=spu)
        res.append(sigma_ode_residual(tr))
    assert res[0] < 5e-3
    # second order in the sample spacing
    assert 3.0 < res[0] / res[1] < 5.0


def test_sigma_ode_zero_orbit():
    tr = integrate(GroundState(3), LogState(0, 0.0, 0.0), 3)
    assert sigma_ode_residual(tr) == 0.0


def test_sigma_ode_rejects_off_level_orbit():
    c = float(singular_solution(3).u(1.0))
    tr = integrate(GroundState(3), LogState(0, c, c), 3)
    with pytest.raises(ValueError):
        sigma_ode_residual(tr)
    with pytest.raises(ValueError):
        sigma_ode_residual(integrate(Graphene2D(1, 0.5), LogState(0, 0, 0), 1))


def test_theta():
    assert theta(1.0, 1.0) == pytest.approx(np.pi / 4)
    with pytest.raises(ValueError):
        theta(0.0, 1.0)


def test_theta_derivative_example():
    # b1 = 1, b2 = 1/2 at (1, 1): (-(1/2)*2 - 1) / 2 = -1
    assert theta_derivative(Graphene2D(1, 0.5), 1.0, 1.0) == pytest.approx(-1.0)


@pytest.mark.parametrize("params", [Graphene2D(1, 0.5, 1), Graphene2D(2, 0.3, 2),
                                    Graphene2D(0.7, 1.1, -2), GroundState(2), GroundState(3)])
def test_theta_formulas_agree_on_zero_energy_set(params):
    # points on E = 0: scale (c, s) so that the energy vanishes
    phis = np.linspace(0.1, 1.4, 9) * (1 if getattr(params, "tau", 1) > 0 else -1)
    ok = 0
    for phi in phis:
        c, s = np.cos(phi), np.sin(phi)
        gam = np.geomspace(1e-3, 10, 4000)
        e = energy(params, gam * c, gam * s)
        idx = np.where(np.diff(np.sign(e)) != 0)[0]
        if not len(idx):
            continue
        from scipy.optimize import brentq
        g0 = brentq(lambda a: energy(params, a * c, a * s), gam[idx[0]], gam[idx[0] + 1], xtol=1e-15)
        f, g = g0 * c, g0 * s
        assert theta_derivative(params, f, g) == pytest.approx(theta_rate(params, f, g), rel=1e-9)
        assert theta_derivative(params, f, g) < 0
        ok += 1
    assert ok > 3


@settings(max_examples=30, deadline=None)
@given(st.floats(2.0, 6.0), st.floats(0.2, 5.0))
def test_profile_round_trip(n, lam):
    P = ground_state_radial(n, lam)
    prof = P.profile(np.geomspace(1e-2, 1e2, 50))
    t, f, g = from_profile(prof)
    fe, ge = ground_log_orbit(n, np.log(lam), t)
    assert np.allclose(f, fe, rtol=1e-12) and np.allclose(g, ge, rtol=1e-12)
    f0, g0 = ground_log_orbit(n, np.log(lam), 0.0)
    tr = integrate(GroundState(n), LogState(0, float(f0), float(g0)), 2.0)
    back = to_profile(tr)
    assert np.allclose(back.us, P.u(back.rs), rtol=1e-7)


def test_profile_validation():
    with pytest.raises(ValueError):
        RadialProfile(GroundState(2), [1, 0.5], [0, 0], [0, 0])
    with pytest.raises(ValueError):
        RadialProfile(GroundState(2), [0, 1], [0, 0], [0, 0])


def test_excited_orbit_in_log_variables():
    S = 2
    P = excited_explicit(S)
    r = np.exp(np.linspace(-3, 3, 61))
    f, g = np.sqrt(r) * P.u(r), np.sqrt(r) * P.v(r)
    assert np.abs(energy(P.params, f, g)).max() < 1e-13
