import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critdirac.closed_form import excited_explicit
from critdirac.params import Graphene2D
from critdirac.radial import LogState, energy, integrate, radial_residual, theta_rate, to_profile
from critdirac.shooting import DecayError, reflect, scale_profile_pair, shoot


@pytest.fixture(scope="module")
def s1():
    return shoot(1.0, 0.5, 1)


def test_midpoint_data():
    p = Graphene2D(2.0, 0.3, 1)
    assert p.a == pytest.approx(np.sqrt(3 / 2.6))
    assert abs(energy(p, p.a, p.a)) < 1e-15
    q = Graphene2D(0.7, 1.1, -2)
    assert q.tau == -1 and abs(energy(q, q.a, -q.a)) < 1e-15


def test_explicit_profile(s1):
    P = excited_explicit(1)
    sel = np.abs(s1.ts) <= 8
    r = np.exp(s1.ts[sel])
    assert np.abs(s1.fs[sel] - np.sqrt(r) * P.u(r)).max() < 1e-6
    assert np.abs(s1.gs[sel] - np.sqrt(r) * P.v(r)).max() < 1e-6


@pytest.mark.parametrize("S", [-3, -2, -1, 0, 1, 2])
def test_explicit_limits(S):
    r = shoot(1.0, 0.5, S)
    ell = np.sqrt(2 * abs(2 * S + 1))
    assert r.ell.value == pytest.approx(ell, abs=1e-4)
    assert r.ell_prime.value == pytest.approx(r.tau * ell, abs=1e-4)
    assert r.cubic.value == pytest.approx(r.cubic_prediction, rel=1e-2)
    assert np.sign(r.cubic.value) == np.sign(2 * S + 1)


@pytest.mark.parametrize("b1, b2, S", [(2.0, 0.3, 1), (0.7, 1.1, -2), (1.5, 0.0, 2), (0.4, 2.0, 0)])
def test_generic_consistency(b1, b2, S):
    r = shoot(b1, b2, S)
    k = abs(S + 0.5)
    assert r.reflection_residual <= 1e-8
    assert r.decay_rate_forward == pytest.approx(k, rel=1e-2)
    assert r.decay_rate_backward == pytest.approx(k, rel=1e-2)
    assert r.cubic.value == pytest.approx(r.cubic_prediction, rel=1e-2)
    assert r.ell_prime.value == pytest.approx(r.tau * r.ell.value, rel=1e-6)


def test_backward_half_is_exact_mirror(s1):
    t, f, g = reflect(s1.backward, s1.tau)
    n = min(len(t), len(s1.forward))
    assert np.array_equal(t[:n], s1.forward.ts[:n])
    assert np.array_equal(f[:n], s1.forward.fs[:n])


def test_sign_and_rotation_on_resolved_samples():
    for S in (1, -2):
        r = shoot(1.0, 0.5, S)
        for half in (r.forward, r.backward):
            ok = r.resolved(half)
            assert ok.sum() > 50
            assert np.all(r.tau * half.fs[ok] * half.gs[ok] > 0)
            assert np.all(theta_rate(r.params, half.fs[ok], half.gs[ok]) < 0)


def test_energy_stays_at_zero(s1):
    assert s1.energy_drift < 1e-11
    assert s1.forward.trusted and s1.backward.trusted


def test_non_integer_S_rejected():
    with pytest.raises(ValueError):
        shoot(1.0, 0.5, -0.5)
    with pytest.raises(ValueError):
        Graphene2D(1.0, 0.5, 0.5)


def test_short_horizon_fails():
    with pytest.raises(DecayError):
        shoot(1.0, 0.5, 1, horizon=3.0)


def test_off_level_data_does_not_decay():
    # perturbing the midpoint data off E = 0 gives a periodic orbit, not a decaying one
    p = Graphene2D(1.0, 0.5, 1)
    tr = integrate(p, LogState(0, p.a * (1 + 1e-3), p.a), 40.0, tol=1e-12, stop_below=1e-6)
    assert not tr.terminated
    assert tr.amplitude.min() > 1e-3


def test_loose_tolerance_is_detected():
    # at a loose tolerance the energy error destroys the decay before the floor
    with pytest.raises(DecayError):
        shoot(1.0, 0.5, 1, tol=1e-6)


def test_scaling_family(s1):
    prof = to_profile(s1.forward)
    sel = prof.rs < 50
    for lam, sigma in ((2.0, 1), (0.5, -1)):
        rs, us, vs = scale_profile_pair(prof.rs[sel], prof.us[sel], prof.vs[sel], lam, sigma)
        P = excited_explicit(1, lam=lam, sigma=sigma)
        assert np.abs(us - P.u(rs)).max() < 1e-6
        assert np.abs(vs - P.v(rs)).max() < 1e-6
        r1, r2 = radial_residual(P.params, rs, us, vs, P.du(rs), P.dv(rs))
        assert max(np.abs(r1).max(), np.abs(r2).max()) < 1e-5


@settings(max_examples=8, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 2.0), st.sampled_from([-3, -2, -1, 0, 1, 2]))
def test_random_parameters(b1, b2, S):
    r = shoot(b1, b2, S)
    assert r.reflection_residual <= 1e-8
    assert r.ell_prime.value == pytest.approx(r.tau * r.ell.value, rel=1e-6)
    assert r.cubic.value == pytest.approx(r.cubic_prediction, rel=1e-2)
