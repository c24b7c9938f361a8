"""CSV export and import of profiles, trajectories and grid fields.

Numbers are written with the shortest round-trip representation, so that
re-reading and re-writing a file reproduces it exactly.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .field import SpinorField
from .params import RadialProfile
from .radial import LogTrajectory

__all__ = ["format_float", "export_profile", "read_columns", "export_field", "parse_range", "parse_box"]


def format_float(x) -> str:
    """Shortest repr, without a trailing '.0' for integral values."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _write(path, header, columns) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([format_float(v) for v in row])


def export_profile(obj: RadialProfile | LogTrajectory, path) -> Path:
    """Write ``r,u,v`` for a profile or ``t,f,g,energy`` for a trajectory."""
    if isinstance(obj, RadialProfile):
        _write(path, ["r", "u", "v"], [obj.rs, obj.us, obj.vs])
    elif isinstance(obj, LogTrajectory):
        _write(path, ["t", "f", "g", "energy"], [obj.ts, obj.fs, obj.gs, obj.energies])
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")
    return Path(path)


def read_columns(path) -> dict[str, np.ndarray]:
    """Read a headered numeric CSV into a dict of float arrays."""
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    return {name: data[:, i].copy() for i, name in enumerate(header)}


def export_field(field: SpinorField, path) -> Path:
    """Write grid nodes and spinor components: x1..xn, re_1, im_1, ..., re_N, im_N."""
    n, N = field.grid.n, field.rep.N
    pts = field.grid.points().reshape(-1, n)
    vals = field.values.reshape(-1, N)
    header = [f"x{j + 1}" for j in range(n)]
    cols = [pts[:, j] for j in range(n)]
    for a in range(N):
        header += [f"re_{a + 1}", f"im_{a + 1}"]
        cols += [vals[:, a].real, vals[:, a].imag]
    _write(path, header, cols)
    return Path(path)


def parse_range(spec: str) -> np.ndarray | tuple[float, float]:
    """'a:b' -> (a, b); 'a:b:k' -> linspace; 'a:b:k:log' -> geomspace."""
    parts = spec.split(":")
    try:
        if len(parts) == 2:
            return float(parts[0]), float(parts[1])
        if len(parts) in (3, 4):
            a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
            if len(parts) == 4:
                if parts[3] != "log":
                    raise ValueError
                return np.geomspace(a, b, k)
            return np.linspace(a, b, k)
    except ValueError:
        pass
    raise ValueError(f"bad range spec {spec!r}; expected a:b, a:b:num or a:b:num:log")


def parse_box(spec: str) -> tuple[float, float, int]:
    """'lo,hi,m' -> (lo, hi, m)."""
    try:
        lo, hi, m = spec.split(",")
        return float(lo), float(hi), int(m)
    except ValueError:
        raise ValueError(f"bad box spec {spec!r}; expected lo,hi,m") from None
