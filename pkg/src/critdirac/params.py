"""Model parameters and sampled radial profiles shared across modules."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonIntegerDimensionError(ValueError):
    """A matrix-valued operation was requested for a non-integer dimension."""


@dataclass(frozen=True)
class GroundState:
    """Plain critical nonlinearity |z|^(2/(n-1)) in dimension n (real n >= 2 allowed)."""

    n: float

    def __post_init__(self):
        if not np.isfinite(self.n) or self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n!r}")

    @property
    def dim(self) -> int:
        if int(self.n) != self.n:
            raise NonIntegerDimensionError(f"n = {self.n} is not an integer")
        return int(self.n)

    @property
    def weight(self) -> float:
        """Exponent e in u = r^(-e) f(ln r)."""
        return (self.n - 1) / 2

    @property
    def critical_exponent(self) -> float:
        """2^sharp = 2n/(n-1)."""
        return 2 * self.n / (self.n - 1)


@dataclass(frozen=True)
class Graphene2D:
    """Two-dimensional model with h = diag(b1|z1|^2 + 2 b2|z2|^2, 2 b2|z1|^2 + b1|z2|^2).

    ``S`` is the angular momentum of the separated ansatz.
    """

    beta1: float
    beta2: float
    S: int = 0

    def __post_init__(self):
        if not (self.beta1 > 0 and self.beta2 >= 0):
            raise ValueError("need beta1 > 0 and beta2 >= 0")
        if int(self.S) != self.S:
            raise ValueError(f"S must be an integer, got {self.S!r}")
        object.__setattr__(self, "S", int(self.S))

    n = 2
    weight = 0.5
    critical_exponent = 4.0

    @property
    def dim(self) -> int:
        return 2

    @property
    def k(self) -> float:
        return self.S + 0.5

    @property
    def tau(self) -> int:
        return 1 if self.S >= 0 else -1

    @property
    def a(self) -> float:
        """Amplitude of the starting point (a, tau a) on the energy-zero set."""
        return float(np.sqrt(abs(2 * self.S + 1) / (self.beta1 + 2 * self.beta2)))


ModelParams = GroundState | Graphene2D


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples (r_i, u_i, v_i) of a radial pair, r strictly increasing and positive."""

    params: ModelParams
    rs: np.ndarray
    us: np.ndarray
    vs: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rs = np.asarray(self.rs, dtype=float)
        us = np.asarray(self.us, dtype=float)
        vs = np.asarray(self.vs, dtype=float)
        if rs.ndim != 1 or us.shape != rs.shape or vs.shape != rs.shape:
            raise ValueError("rs, us, vs must be 1-d arrays of equal length")
        if np.any(rs <= 0) or np.any(np.diff(rs) <= 0):
            raise ValueError("rs must be positive and strictly increasing")
        for name, a in (("rs", rs), ("us", us), ("vs", vs)):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def __len__(self):
        return len(self.rs)
