"""Quadrature rules on spheres S^(n-1) in R^n."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .closed_form import sphere_area

__all__ = ["sphere_rule", "lebedev26"]


def _circle(m: int, offset: float = 0.0):
    phi = offset + 2 * np.pi * np.arange(m) / m
    return np.c_[np.cos(phi), np.sin(phi)], np.full(m, 2 * np.pi / m)


@lru_cache(maxsize=None)
def _product_rule(n: int, m: int):
    if n == 2:
        return _circle(2 * m, offset=np.pi / (2 * m))
    a = (n - 3) / 2
    t, wt = roots_jacobi(m, a, a)
    pts_low, w_low = _product_rule(n - 1, m)
    s = np.sqrt(1 - t * t)
    pts = np.concatenate([np.c_[np.full(len(w_low), ti), si * pts_low] for ti, si in zip(t, s)])
    w = np.concatenate([wi * w_low for wi in wt])
    return pts, w


def sphere_rule(n: int, m: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Points on S^(n-1) and weights summing to |S^(n-1)|.

    n = 2: 2m equispaced angles.  n >= 3: Gauss-Jacobi in the first coordinate
    (weight (1 - t^2)^((n-3)/2)) times the rule on S^(n-2), recursively.
    Exact for polynomials of degree about 2m - 1.
    """
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    pts, w = _product_rule(int(n), int(m))
    return pts.copy(), w * (sphere_area(n - 1) / w.sum())


def lebedev26() -> tuple[np.ndarray, np.ndarray]:
    """The 26-point rule on S^2 (degree 7); weights sum to 4 pi."""
    ax = np.vstack([np.eye(3), -np.eye(3)])
    edges = []
    for i in range(3):
        for j in range(i + 1, 3):
            for si in (1, -1):
                for sj in (1, -1):
                    v = np.zeros(3)
                    v[i], v[j] = si, sj
                    edges.append(v / np.sqrt(2))
    corners = np.array([[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]) / np.sqrt(3)
    pts = np.vstack([ax, np.array(edges), corners])
    w = np.r_[np.full(6, 1 / 21), np.full(12, 4 / 105), np.full(8, 9 / 280)]
    return pts, 4 * np.pi * w
