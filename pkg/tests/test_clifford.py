import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critdirac.clifford import (CliffordError, build_rep, dirac_symbol, inversion_matrix,
                                spinor_dim, verify_rep)


@pytest.mark.parametrize("n, N", [(2, 2), (3, 4), (4, 4), (5, 8), (6, 8), (7, 16), (8, 16)])
def test_dimensions(n, N):
    rep = build_rep(n)
    assert rep.N == N == spinor_dim(n)
    assert rep.alphas.shape == (n, N, N)


@pytest.mark.parametrize("n", range(2, 9))
def test_identities(n):
    res = verify_rep(build_rep(n))
    assert max(res.values()) < 1e-14, res


@pytest.mark.parametrize("n", range(2, 9))
def test_entries_are_units(n):
    A = build_rep(n).alphas
    allowed = np.array([0, 1, -1, 1j, -1j])
    assert np.all(np.min(np.abs(A[..., None] - allowed), axis=-1) == 0)


def test_n2_matrices_and_inversion():
    rep = build_rep(2)
    assert np.array_equal(rep.alphas[0], [[0, 1], [1, 0]])
    assert np.array_equal(rep.alphas[1], [[0, -1j], [1j, 0]])
    x = np.array([0.3, -0.4])
    w = (0.3 - 0.4j) / 0.5
    U = inversion_matrix(rep, x)
    assert np.allclose(U, [[0, -1j * np.conj(w)], [1j * w, 0]], atol=0, rtol=1e-15)


def test_n3_uses_pauli_matrices():
    rep = build_rep(3)
    pauli = [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]]
    assert np.array_equal(rep.sigmas, pauli)


def test_alphas_are_read_only():
    with pytest.raises(ValueError):
        build_rep(3).alphas[0, 0, 0] = 5


@pytest.mark.parametrize("n", [0, 1, 2.5, -3])
def test_bad_dimension(n):
    with pytest.raises(CliffordError):
        build_rep(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_origin_rejected(n):
    rep = build_rep(n)
    with pytest.raises(CliffordError):
        inversion_matrix(rep, np.zeros(n))
    with pytest.raises(CliffordError):
        dirac_symbol(rep, np.zeros(n))


def test_batched_shapes():
    rep = build_rep(3)
    x = np.random.default_rng(0).normal(size=(4, 5, 3))
    assert inversion_matrix(rep, x).shape == (4, 5, 4, 4)
    assert dirac_symbol(rep, x).shape == (4, 5, 4, 4)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 6),
       seed=st.integers(0, 2 ** 32 - 1),
       scale=st.floats(1e-3, 1e3))
def test_symbol_and_commutator(n, seed, scale):
    rep = build_rep(n)
    x = scale * np.random.default_rng(seed).normal(size=n)
    r = np.linalg.norm(x)
    G = rep.grading()
    U = inversion_matrix(rep, x)
    assert np.allclose(dirac_symbol(rep, x) @ U, r * G, atol=1e-12 * r)
    # U is homogeneous of degree 0 and unitary
    assert np.allclose(inversion_matrix(rep, x / r ** 2), U, atol=1e-14)
    assert np.allclose(U @ U.conj().T, np.eye(rep.N), atol=1e-14)
    for j in range(n):
        Aj = -1j * rep.alphas[j]
        assert np.allclose(Aj @ U - U @ Aj, 2 * x[j] / r * G, atol=1e-13)
