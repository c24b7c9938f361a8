import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critdirac.clifford import build_rep
from critdirac.closed_form import (excited_explicit, excited_spinor, ground_state_radial,
                                   ground_state_spinor, apply_nonlinearity, sphere_area)
from critdirac.kelvin_green import (PointSpinorFn, dirac_point, green_convolve, green_gamma, kelvin,
                                    kelvin_profile, radial_angular_integral, verify_dkelvin,
                                    verify_green_identity, verify_integral_equation,
                                    verify_norm_identities)
from critdirac.params import GroundState
from critdirac.verify import random_points, random_test_spinor


def _ground(n, lam=1.0):
    rep = build_rep(n)
    return PointSpinorFn(rep, lambda x: ground_state_spinor(rep, lam, x=x))


@pytest.mark.parametrize("n", [2, 3])
def test_modulus_and_involution(n):
    psi = random_test_spinor(build_rep(n), seed=4)
    x = np.random.default_rng(5).normal(size=(100, n))
    r = np.linalg.norm(x, axis=-1)
    K = kelvin(psi)
    lhs = np.linalg.norm(K(x), axis=-1)
    rhs = r ** -(n - 1) * np.linalg.norm(psi(x / r[:, None] ** 2), axis=-1)
    assert np.allclose(lhs, rhs, rtol=1e-14, atol=0)
    assert np.allclose(kelvin(K)(x), psi(x), rtol=0, atol=1e-12 * np.abs(psi(x)).max())


@pytest.mark.parametrize("n", [2, 3])
def test_unit_bubble_is_fixed(n):
    psi = _ground(n)
    x = np.random.default_rng(6).normal(size=(50, n))
    assert np.allclose(kelvin(psi)(x), psi(x), atol=1e-14)
    # and |psi_K(0+)| tends to n^((n-1)/2)
    assert np.linalg.norm(kelvin(psi)(np.full((1, n), 1e-8))) == pytest.approx(n ** ((n - 1) / 2), rel=1e-10)


def test_kelvin_maps_lambda_to_inverse():
    x = np.random.default_rng(7).normal(size=(20, 3))
    assert np.allclose(kelvin(_ground(3, 2.0))(x), _ground(3, 0.5)(x), atol=1e-14)


def test_kelvin_rejects_origin():
    with pytest.raises(ValueError):
        kelvin(_ground(2))(np.zeros((1, 2)))


def test_kelvin_profile_fixes_unit_bubble_and_excited():
    rs = np.geomspace(0.1, 10, 41)
    for P in (ground_state_radial(3), excited_explicit(2)):
        prof = P.profile(rs)
        K = kelvin_profile(prof)
        assert np.allclose(K.rs, rs) and np.allclose(K.us, prof.us, rtol=1e-12)
        assert np.allclose(K.vs, prof.vs, rtol=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_dkelvin_fourth_order(n):
    rep = build_rep(n)
    psi = random_test_spinor(rep, seed=n)
    pts = random_points(n, 20, seed=11)
    ratio = verify_dkelvin(psi, pts, 1e-2) / verify_dkelvin(psi, pts, 5e-3)
    assert 12 <= ratio <= 20


@pytest.mark.parametrize("n", [2, 3])
def test_dkelvin_constant_spinor(n):
    rep = build_rep(n)
    c = np.arange(1, rep.N + 1) * (1 + 0.5j)
    psi = PointSpinorFn(rep, lambda x: np.broadcast_to(c, x.shape[:-1] + (rep.N,)))
    pts = random_points(n, 10, seed=2, rmin=0.5, rmax=2)
    # D psi = 0, so both sides reduce to the Dirac operator of |x|^(1-n) U(x) c
    assert verify_dkelvin(psi, pts, 1e-2) < 1e-5
    assert np.abs(dirac_point(kelvin(psi), pts, 1e-3)).max() < 1e-8


def test_dkelvin_on_ground_state_matches_nonlinearity():
    n = 2
    psi = _ground(n, 1.3)
    pts = random_points(n, 10, seed=3, rmin=0.5, rmax=2)
    lhs = dirac_point(kelvin(psi), pts, 1e-3)
    Hpsi = PointSpinorFn(psi.rep, lambda y: apply_nonlinearity(GroundState(n), psi(y)))
    rhs = kelvin(Hpsi)(pts) / np.sum(pts ** 2, axis=-1)[:, None]
    assert np.abs(lhs - rhs).max() < 1e-9


def test_dkelvin_rejects_small_points():
    with pytest.raises(ValueError):
        verify_dkelvin(_ground(2), np.array([[0.01, 0.0]]))


@pytest.mark.parametrize("n", [2, 3])
def test_radial_angular_integral_of_bubble(n):
    # int |psi|^(2#) = (n/2)^n |S^n| for the bubble, at any scale
    q = 2 * n / (n - 1)
    psi = _ground(n, 0.7)
    val = radial_angular_integral(lambda x: np.linalg.norm(psi(x), axis=-1) ** q, n)
    assert val == pytest.approx((n / 2) ** n * sphere_area(n), rel=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_norm_identities_ground_state(n):
    dn, dq = verify_norm_identities(_ground(n, 2.0), s_range=(-13.3, 14.1))
    assert dn < 5e-3 and dq < 5e-3


def test_norm_identities_excited_and_random():
    rep = build_rep(2)
    ex = PointSpinorFn(rep, lambda x: excited_spinor(1, lam=1.7, x=x))
    assert max(verify_norm_identities(ex)) < 5e-3
    # the identities hold for any decaying spinor, not only for solutions
    dn, dq = verify_norm_identities(random_test_spinor(rep, 9), s_range=(-14, 12))
    assert dn < 5e-3 and dq < 5e-3


def test_norm_homogeneity():
    psi = _ground(2, 1.5)
    q = 4.0
    dens = lambda f: lambda x: np.linalg.norm(f(x), axis=-1) ** q  # noqa: E731
    a = radial_angular_integral(dens(psi), 2)
    b = radial_angular_integral(dens(psi.scaled(2.0)), 2)
    assert b == pytest.approx(2 ** q * a, rel=1e-13)


def test_gamma_values():
    rep = build_rep(2)
    assert np.allclose(green_gamma(rep, np.array([1.0, 0.0])), 1j / (2 * np.pi) * rep.alphas[0])
    with pytest.raises(ValueError):
        green_gamma(rep, np.zeros(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1), st.floats(0.01, 100.0))
def test_gamma_anti_hermitian_and_norm(n, seed, scale):
    rep = build_rep(n)
    z = scale * np.random.default_rng(seed).normal(size=n)
    G = green_gamma(rep, z)
    assert np.allclose(G.conj().T, -G, atol=1e-14 * np.abs(G).max())
    r = np.linalg.norm(z)
    assert np.linalg.norm(G, 2) == pytest.approx(r ** (1 - n) / sphere_area(n - 1), rel=1e-12)


def test_integral_equation_ground_state():
    pts = np.random.default_rng(0).uniform(-2, 2, size=(5, 2))
    assert verify_integral_equation(_ground(2), GroundState(2), pts) <= 1e-2


def test_integral_equation_zero_field():
    rep = build_rep(2)
    zero = PointSpinorFn(rep, lambda x: np.zeros(x.shape[:-1] + (2,), dtype=complex))
    assert verify_integral_equation(zero, GroundState(2), np.array([[0.3, 0.2]])) == 0.0


def test_integral_equation_rejects_far_points():
    with pytest.raises(ValueError):
        verify_integral_equation(_ground(2), GroundState(2), np.array([[5.0, 0.0]]))


def test_convolution_is_linear():
    rep = build_rep(2)
    F = PointSpinorFn(rep, lambda y: apply_nonlinearity(GroundState(2), ground_state_spinor(rep, x=y)))
    x = np.array([[0.4, -0.3]])
    a = green_convolve(F, x, order=12)
    b = green_convolve(F.scaled(2.0), x, order=12)
    assert np.array_equal(b, 2 * a)


@pytest.mark.parametrize("n", [2, 3])
def test_green_identity(n):
    rep = build_rep(n)
    phi = random_test_spinor(rep, seed=12)
    pts = random_points(n, 3, seed=13, rmin=0.1, rmax=1.0)
    kw = {"sphere_m": 24, "order": 16} if n == 3 else {}
    assert verify_green_identity(phi, pts, R=12.0, **kw) < 1e-6
