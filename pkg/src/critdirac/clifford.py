"""Clifford algebra representations, the Dirac symbol and the inversion matrices.

The matrices are built from entries in {0, +-1, +-i} only, so Hermiticity is
exact.  For every n the alphas have the block-antidiagonal form

    alpha_j = [[0, sigma_j^*], [sigma_j, 0]]

where ``^*`` is the conjugate transpose.  For odd n the sigma_j are Hermitian
(and the adjoint is a no-op); for even n the last generator is ``i * I`` and
``a . sigma`` for n = 2 reduces to the complex number ``a_1 + i a_2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class CliffordError(ValueError):
    """Raised for invalid dimensions or points."""


def spinor_dim(n: int) -> int:
    """N = 2^floor((n+1)/2)."""
    return 2 ** ((n + 1) // 2)


def _odd_family(k: int) -> list[np.ndarray]:
    """k (odd) mutually anticommuting Hermitian matrices of size 2^((k-1)/2)."""
    gens = [np.ones((1, 1), dtype=complex)]
    while len(gens) < k:
        eye = np.eye(gens[0].shape[0], dtype=complex)
        gens = [np.kron(PAULI[0], g) for g in gens]
        gens += [np.kron(PAULI[1], eye), np.kron(PAULI[2], eye)]
    return gens


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Dimension data and the matrices alpha_j (n, N, N) and sigma_j (n, N/2, N/2)."""

    n: int
    N: int
    alphas: np.ndarray
    sigmas: np.ndarray

    @property
    def half(self) -> int:
        return self.N // 2

    def alpha_dot(self, x) -> np.ndarray:
        """alpha . x for x of shape (..., n); returns (..., N, N)."""
        return np.einsum("...j,jab->...ab", np.asarray(x, dtype=float), self.alphas)

    def sigma_dot(self, x) -> np.ndarray:
        """a . sigma for a of shape (..., n); returns (..., N/2, N/2).

        For n = 2 this is the 1x1 matrix ``a_1 + i a_2``.
        """
        x = np.asarray(x, dtype=float)
        if self.n == 2:
            return (x[..., 0] + 1j * x[..., 1])[..., None, None]
        return np.einsum("...j,jab->...ab", x, self.sigmas)

    def grading(self) -> np.ndarray:
        """diag(I_{N/2}, -I_{N/2})."""
        return np.diag(np.r_[np.ones(self.half), -np.ones(self.half)]).astype(complex)


def _build_sigmas(n: int) -> np.ndarray:
    if n == 2:
        return np.array([[[1]], [[1j]]], dtype=complex)
    if n % 2:
        return np.array(_odd_family(n))
    fam = _odd_family(n - 1)
    return np.array(fam + [1j * np.eye(fam[0].shape[0])])


def _check_rep(rep: CliffordRep, atol: float = 1e-14) -> None:
    res = verify_rep(rep)
    bad = {k: v for k, v in res.items() if v > atol}
    if bad:
        raise CliffordError(f"representation for n={rep.n} fails checks: {bad}")


@lru_cache(maxsize=None)
def build_rep(n: int) -> CliffordRep:
    """Return the Clifford representation for spatial dimension ``n >= 2``.

    The construction is verified before it is returned.
    """
    if int(n) != n or n < 2:
        raise CliffordError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    sig = _build_sigmas(n)
    half = sig.shape[1]
    Z = np.zeros((half, half), dtype=complex)
    alphas = np.array([np.block([[Z, s.conj().T], [s, Z]]) for s in sig])
    alphas.setflags(write=False)
    sig.setflags(write=False)
    rep = CliffordRep(n=n, N=2 * half, alphas=alphas, sigmas=sig)
    assert rep.N == spinor_dim(n)
    _check_rep(rep)
    return rep


def _unit(x, n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n:
        raise CliffordError(f"expected points with last axis {n}, got shape {x.shape}")
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0):
        raise CliffordError("point x = 0 is not allowed")
    return x / r[..., None], r


def inversion_matrix(rep: CliffordRep, x) -> np.ndarray:
    """The unitary matrix U(x); ``x`` may carry leading batch axes."""
    xh, _ = _unit(x, rep.n)
    if rep.n == 2:
        w = xh[..., 0] + 1j * xh[..., 1]
        out = np.zeros(xh.shape[:-1] + (2, 2), dtype=complex)
        out[..., 0, 1] = -1j * np.conj(w)
        out[..., 1, 0] = 1j * w
        return out
    s = rep.sigma_dot(xh)
    h = rep.half
    out = np.zeros(xh.shape[:-1] + (rep.N, rep.N), dtype=complex)
    out[..., :h, h:] = -1j * np.conj(np.swapaxes(s, -1, -2))
    out[..., h:, :h] = 1j * s
    return out


def dirac_symbol(rep: CliffordRep, x) -> np.ndarray:
    """-i alpha . x, rejecting x = 0."""
    _unit(x, rep.n)
    return -1j * rep.alpha_dot(x)


def verify_rep(rep: CliffordRep, n_random: int = 100, seed: int = 0) -> dict[str, float]:
    """Sup-norm residuals of every algebraic identity used downstream."""
    n, N = rep.n, rep.N
    eye = np.eye(N)
    A = rep.alphas
    anti = np.einsum("jab,kbc->jkac", A, A)
    anti = anti + np.swapaxes(anti, 0, 1)
    anti -= 2 * np.einsum("jk,ac->jkac", np.eye(n), eye)
    out = {
        "anticommutation": float(np.abs(anti).max()),
        "hermitian": float(np.abs(A - np.conj(np.swapaxes(A, 1, 2))).max()),
    }
    S = rep.sigmas
    if n >= 3:
        Sd = np.conj(np.swapaxes(S, 1, 2))
        sa = np.einsum("jab,kbc->jkac", S, Sd)
        sa = sa + np.swapaxes(sa, 0, 1) - 2 * np.einsum("jk,ac->jkac", np.eye(n), np.eye(rep.half))
        out["sigma_anticommutation"] = float(np.abs(sa).max())

    rng = np.random.default_rng(seed)
    xs = rng.normal(size=(n_random, n))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    U = inversion_matrix(rep, xs)
    Ud = np.conj(np.swapaxes(U, -1, -2))
    out["U_hermitian"] = float(np.abs(U - Ud).max())
    out["U_square"] = float(np.abs(U @ U - eye).max())
    G = rep.grading()
    D = dirac_symbol(rep, xs)
    out["symbol_times_U"] = float(np.abs(D @ U - G).max())
    # (-i alpha_j) U - U (-i alpha_j) = 2 x_j/|x| diag(I, -I)
    comm = np.einsum("jab,mbc->mjac", -1j * A, U) - np.einsum("mab,jbc->mjac", U, -1j * A)
    comm -= 2 * xs[:, :, None, None] * G
    out["commutation"] = float(np.abs(comm).max())
    return out
