"""Spinor fields on uniform tensor grids: the finite-difference Dirac operator,
PDE residuals, and action / norm quadrature with radial tail corrections."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson

from .clifford import CliffordRep
from .closed_form import apply_nonlinearity, potential
from .params import GroundState, Graphene2D, ModelParams, RadialProfile

__all__ = ["GridSpec", "SpinorField", "QuadratureError", "TruncationWarning", "MEMORY_CAP",
           "sample", "derivative", "dirac_fd", "pde_residual", "interior_mask",
           "integrate_density", "action", "lq_norm", "radial_tail"]

MEMORY_CAP = 2e8  # complex entries m^n * N


class QuadratureError(RuntimeError):
    """Quadrature on the grid did not converge under 2h subsampling."""


class TruncationWarning(UserWarning):
    """The field has not decayed at the box boundary."""


@dataclass(frozen=True)
class GridSpec:
    """The cube [lo, hi]^n sampled by m nodes per axis."""

    n: int
    lo: float
    hi: float
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not self.hi > self.lo:
            raise ValueError("need hi > lo")
        if int(self.m) != self.m or self.m < 8:
            raise ValueError("need m >= 8 nodes per axis for the 4th-order stencil")

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.m - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.m,) * self.n

    def axis(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.m)

    def points(self) -> np.ndarray:
        """Node coordinates, shape (m, ..., m, n)."""
        ax = self.axis()
        return np.stack(np.meshgrid(*([ax] * self.n), indexing="ij"), axis=-1)

    def check_memory(self, N: int) -> None:
        size = float(self.m) ** self.n * N
        if size > MEMORY_CAP:
            raise MemoryError(f"grid needs {size:.3g} complex entries, cap is {MEMORY_CAP:.3g}")

    def refined(self) -> "GridSpec":
        """The grid with h halved."""
        return GridSpec(self.n, self.lo, self.hi, 2 * self.m - 1)


@dataclass(frozen=True, eq=False)
class SpinorField:
    grid: GridSpec
    rep: CliffordRep
    values: np.ndarray  # shape grid.shape + (N,)

    def __post_init__(self):
        if self.values.shape != self.grid.shape + (self.rep.N,):
            raise ValueError(f"values have shape {self.values.shape}, "
                             f"expected {self.grid.shape + (self.rep.N,)}")

    @property
    def modulus(self) -> np.ndarray:
        return np.linalg.norm(self.values, axis=-1)


def sample(rep: CliffordRep, grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray]) -> SpinorField:
    """Evaluate a vectorised spinor function on the grid nodes."""
    if grid.n != rep.n:
        raise ValueError(f"grid dimension {grid.n} does not match representation dimension {rep.n}")
    grid.check_memory(rep.N)
    vals = np.asarray(fn(grid.points()), dtype=complex)
    if vals.shape != grid.shape + (rep.N,):
        raise ValueError(f"function returned shape {vals.shape}")
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite samples (singular point on the grid?)")
    return SpinorField(grid, rep, vals)


_EDGE0 = np.array([-25, 48, -36, 16, -3]) / 12
_EDGE1 = np.array([-3, -10, 18, -6, 1]) / 12


def derivative(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Fourth-order finite difference along ``axis``; one-sided at the two boundary layers."""
    f = np.moveaxis(values, axis, 0)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / 12
    d[0] = np.tensordot(_EDGE0, f[:5], axes=1)
    d[1] = np.tensordot(_EDGE1, f[:5], axes=1)
    d[-1] = -np.tensordot(_EDGE0, f[-1:-6:-1], axes=1)
    d[-2] = -np.tensordot(_EDGE1, f[-1:-6:-1], axes=1)
    return np.moveaxis(d / h, 0, axis)


def dirac_fd(field: SpinorField) -> SpinorField:
    """D psi = -i sum_j alpha_j d_j psi."""
    out = np.zeros_like(field.values)
    for j in range(field.grid.n):
        dj = derivative(field.values, j, field.grid.h)
        out += np.einsum("ab,...b->...a", -1j * field.rep.alphas[j], dj)
    return SpinorField(field.grid, field.rep, out)


def interior_mask(grid: GridSpec, layers: int = 2, exclude_radius: float | None = None) -> np.ndarray:
    """Nodes at least ``layers`` away from every face, optionally outside a ball."""
    idx = np.arange(grid.m)
    ok1 = (idx >= layers) & (idx < grid.m - layers)
    mask = np.ones(grid.shape, dtype=bool)
    for j in range(grid.n):
        sh = [1] * grid.n
        sh[j] = grid.m
        mask &= ok1.reshape(sh)
    if exclude_radius is not None:
        mask &= np.linalg.norm(grid.points(), axis=-1) > exclude_radius
    return mask


def pde_residual(field: SpinorField, params: ModelParams, layers: int = 2,
                 exclude_radius: float | None = None) -> float:
    """max |D psi - h(psi) psi| over interior nodes."""
    r = dirac_fd(field).values - apply_nonlinearity(params, field.values)
    mask = interior_mask(field.grid, layers, exclude_radius)
    return float(np.linalg.norm(r, axis=-1)[mask].max())


def _trapezoid_weights(m: int, h: float) -> np.ndarray:
    w = np.full(m, h)
    w[0] = w[-1] = h / 2
    return w


def integrate_density(grid: GridSpec, density: np.ndarray, stride: int = 1) -> float:
    """Tensor-product trapezoid rule; ``stride = 2`` uses every other node."""
    if stride != 1:
        if (grid.m - 1) % stride:
            raise ValueError("subsampling needs (m - 1) divisible by the stride")
        sl = (slice(None, None, stride),) * grid.n
        density = density[sl]
        m, h = (grid.m - 1) // stride + 1, grid.h * stride
    else:
        m, h = grid.m, grid.h
    w = _trapezoid_weights(m, h)
    out = density
    for _ in range(grid.n):
        out = np.tensordot(out, w, axes=([0], [0]))
    return float(np.real(out))


def _integrate_checked(grid: GridSpec, density: np.ndarray, rtol: float, scale: float) -> float:
    val = integrate_density(grid, density)
    if rtol is not None and (grid.m - 1) % 2 == 0:
        coarse = integrate_density(grid, density, stride=2)
        if abs(coarse - val) > rtol * max(abs(val), scale):
            raise QuadratureError(f"trapezoid rule unresolved: {val:.6g} (h) vs {coarse:.6g} (2h)")
    return val


def _warn_truncation(field: SpinorField, ratio: float = 0.1) -> None:
    mod = field.modulus
    g = field.grid
    edge = max(float(np.abs(np.take(mod, [0, -1], axis=j)).max()) for j in range(g.n))
    centre = float(mod[(g.m // 2,) * g.n])
    if edge > ratio * max(centre, float(mod.max()) * 1e-300):
        warnings.warn(f"boundary |psi| = {edge:.3g} exceeds {ratio} x centre value {centre:.3g}; "
                      "supply a radial tail", TruncationWarning, stacklevel=3)


def _radial_densities(profile: RadialProfile, kind: str, q: float | None = None) -> np.ndarray:
    p = profile.params
    r, u, v = profile.rs, profile.us, profile.vs
    if kind == "dirac":
        du = np.gradient(u, r, edge_order=2)
        dv = np.gradient(v, r, edge_order=2)
        if isinstance(p, Graphene2D):
            return (du + (p.S + 1) * u / r) * v - u * (dv - p.S * v / r)
        return (du + (p.n - 1) * u / r) * v - u * dv
    if kind == "potential":
        if isinstance(p, Graphene2D):
            # for the separated ansatz |psi_1| = |v|, |psi_2| = |u|
            return potential(p, np.stack([v, u], axis=-1))
        return potential(p, np.stack([u, v], axis=-1))
    if kind == "power":
        return (u * u + v * v) ** (q / 2)
    raise ValueError(kind)


def _tail_function(rs: np.ndarray, F: np.ndarray, n: int) -> Callable[[np.ndarray], np.ndarray]:
    """G(s) = int_s^infinity F(r) r^(n-1) dr from samples, with a power-law extension."""
    s = np.log(rs)
    q = F * rs ** n
    slope = (np.log(abs(q[-1])) - np.log(abs(q[-2]))) / (s[-1] - s[-2]) if q[-1] != 0 else -np.inf
    if not slope < -1e-3:
        raise ValueError("radial density does not decay fast enough for a tail correction")
    beyond = 0.0 if q[-1] == 0 else -q[-1] / slope
    cum = cumulative_simpson(q[::-1], x=-s[::-1], initial=0.0)[::-1]
    G = cum + beyond

    def tail(x):
        x = np.asarray(x, dtype=float)
        if np.any(x < rs[0]) or np.any(x > rs[-1]):
            raise ValueError("tail profile does not cover the box boundary")
        return np.interp(np.log(x), s, G)

    return tail


def radial_tail(grid: GridSpec, profile: RadialProfile, F: np.ndarray, nodes: int = 48) -> float:
    """Integral of the radial density F(|y|) over R^n minus the grid box.

    Computed as sum over faces of int G(|y|) (y . nu) / |y|^n dA.
    """
    n = grid.n
    G = _tail_function(profile.rs, F, n)
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = (grid.hi - grid.lo) / 2
    mid = (grid.hi + grid.lo) / 2
    t, tw = mid + half * x, half * w
    total = 0.0
    for j in range(n):
        for side, c in ((1, grid.hi), (-1, grid.lo)):
            if n == 1:
                pts = np.array([[c]])
                ws = np.array([1.0])
            else:
                mesh = np.meshgrid(*([t] * (n - 1)), indexing="ij")
                wmesh = np.meshgrid(*([tw] * (n - 1)), indexing="ij")
                other = np.stack([m.ravel() for m in mesh], axis=-1)
                ws = np.prod(np.stack([m.ravel() for m in wmesh], axis=-1), axis=-1)
                pts = np.insert(other, j, c, axis=1)
            r = np.linalg.norm(pts, axis=-1)
            total += float(np.sum(ws * G(r) * side * pts[:, j] / r ** n))
    return total


def action(field: SpinorField, params: ModelParams, tail: RadialProfile | None = None,
           rtol: float | None = 1e-2) -> float:
    """1/2 int <D psi, psi> - int F(psi), with F(z) = |z|^(2#)/2# for the plain model.

    ``tail`` is a radial profile of the same solution covering the region beyond
    the box; its contribution is added analytically in the radial variable.
    """
    if isinstance(params, GroundState) and params.dim != field.grid.n:
        raise ValueError("model dimension does not match the grid")
    psi = field.values
    Dpsi = dirac_fd(field).values
    d1 = np.real(np.sum(np.conj(psi) * Dpsi, axis=-1))
    d2 = potential(params, psi)
    scale = integrate_density(field.grid, np.abs(d1))
    val = 0.5 * _integrate_checked(field.grid, d1, rtol, scale) - _integrate_checked(field.grid, d2, rtol, scale)
    if tail is None:
        _warn_truncation(field)
        return val
    t1 = radial_tail(field.grid, tail, _radial_densities(tail, "dirac"))
    t2 = radial_tail(field.grid, tail, _radial_densities(tail, "potential"))
    return val + 0.5 * t1 - t2


def lq_norm(field: SpinorField, q: float, tail: RadialProfile | None = None,
            rtol: float | None = 1e-2) -> float:
    """(int |psi|^q)^(1/q), optionally with a radial tail."""
    if not q >= 1:
        raise ValueError("q must be >= 1")
    d = field.modulus ** q
    val = _integrate_checked(field.grid, d, rtol, 0.0)
    if tail is None:
        _warn_truncation(field)
    else:
        val += radial_tail(field.grid, tail, _radial_densities(tail, "power", q))
    return val ** (1 / q)
