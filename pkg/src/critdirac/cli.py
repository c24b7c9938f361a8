"""Command line interface.

Every subcommand prints a short human-readable summary (or the JSON report
with ``--json``), optionally writes the JSON report to ``--report``, and exits
0 when all checks pass, 1 when a check fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .asymptotics import fit_power
from .clifford import build_rep, verify_rep
from .closed_form import (excited_explicit, excited_spinor, ground_state_radial, ground_state_spinor)
from .defaults import DEFAULTS
from .field import GridSpec, TruncationWarning, pde_residual, sample
from .io import export_field, export_profile, parse_box, parse_range, read_columns
from .kelvin_green import PointSpinorFn, verify_integral_equation, verify_norm_identities
from .params import GroundState, Graphene2D
from .radial import LogState, integrate
from .report import Report
from .shooting import shoot
from . import verify as V


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved options of one run: command name plus every option value.

    Options hold model parameters, tolerances, grid and window specs, output
    paths and the seed; unset options take their value from :data:`DEFAULTS`
    or the subcommand's declared default.
    """

    command: str
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"command": self.command, "options": dict(sorted(self.options.items()))}

    def canonical(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(d["command"], dict(d.get("options", {})))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# options that are not part of the run parameters
_PLUMBING = {"json", "report", "timing", "config", "func"}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    p.add_argument("--report", help="also write the JSON report to this path")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")
    p.add_argument("--config", help="JSON file of option values (command-line flags take precedence)")


def _model_args(p, graphene_defaults=(1.0, 0.5, 0)):
    p.add_argument("--model", choices=["ground", "graphene"], default="ground")
    p.add_argument("--n", type=float, default=2.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--beta1", type=float, default=graphene_defaults[0])
    p.add_argument("--beta2", type=float, default=graphene_defaults[1])
    p.add_argument("--S", type=int, default=graphene_defaults[2])


def _params(a):
    return GroundState(a.n) if a.model == "ground" else Graphene2D(a.beta1, a.beta2, a.S)


# ---------------------------------------------------------------- subcommands

def cmd_clifford(a, rep: Report):
    r = build_rep(a.n)
    res = verify_rep(r)
    rep.metrics.update(res)
    rep.metrics["N"] = r.N
    if a.verify:
        for k, v in res.items():
            rep.check(k, v, 1e-14)
    lines = [f"n = {r.n}, N = {r.N}"]
    for j, A in enumerate(r.alphas, 1):
        lines.append(f"alpha_{j} =")
        lines += ["  " + " ".join(f"{_cstr(z):>3}" for z in row) for row in A]
    return "\n".join(lines)


def _cstr(z: complex) -> str:
    z = complex(z)
    for val, s in ((0, "0"), (1, "1"), (-1, "-1"), (1j, "i"), (-1j, "-i")):
        if z == val:
            return s
    return repr(z)


def _radial_out(a, pair, rep: Report):
    rs = parse_range(a.grid)
    if isinstance(rs, tuple):
        raise UsageError("--grid needs a:b:num or a:b:num:log")
    prof = pair.profile(rs)
    if a.out:
        export_profile(prof, a.out)
    from .radial import radial_residual
    r1, r2 = radial_residual(pair.params, rs, pair.u(rs), pair.v(rs), pair.du(rs), pair.dv(rs))
    res = float(max(np.abs(r1).max(initial=0), np.abs(r2).max(initial=0)))
    rep.metrics["radial_residual"] = res
    rep.metrics["samples"] = len(rs)
    rep.check("radial_residual", res, a.residual_tol)
    return f"{pair.name}: {len(rs)} samples, radial residual {res:.3e}" + (f", wrote {a.out}" if a.out else "")


def cmd_bubble(a, rep):
    return _radial_out(a, ground_state_radial(a.n, a.lam), rep)


def cmd_excited(a, rep):
    return _radial_out(a, excited_explicit(a.S, a.lam), rep)


def cmd_integrate(a, rep):
    p = _params(a)
    t1 = a.t0 + a.horizon if a.t1 is None else a.t1
    tr = integrate(p, LogState(a.t0, a.f0, a.g0), t1, tol=a.tol, samples_per_unit=a.samples_per_unit)
    if a.out:
        export_profile(tr, a.out)
    rep.metrics.update(energy_drift=tr.drift, samples=len(tr), energy_start=float(tr.energies[0]),
                       t_start=float(tr.ts[0]), t_end=float(tr.ts[-1]))
    bound = 1e3 * a.tol * max(1.0, abs(float(tr.energies[0])))
    rep.check("energy_drift", tr.drift, bound)
    return f"integrated {len(tr)} samples on [{tr.ts[0]:g}, {tr.ts[-1]:g}], energy drift {tr.drift:.3e}"


def cmd_shoot(a, rep):
    tol = DEFAULTS["shoot_tol"] if a.tol is None else a.tol
    r = shoot(a.beta1, a.beta2, a.S, tol=tol, horizon=a.horizon, floor=a.floor,
              samples_per_unit=a.samples_per_unit)
    k = abs(a.S + 0.5)
    m = rep.metrics
    m.update(a=r.a, tau=r.tau, ell=r.ell.value, ell_prime=r.ell_prime.value, ell_spread=r.ell.spread,
             cubic=r.cubic.value, cubic_prediction=r.cubic_prediction,
             decay_rate_forward=r.decay_rate_forward, decay_rate_backward=r.decay_rate_backward,
             reflection_residual=r.reflection_residual, energy_drift=r.energy_drift,
             t_min=float(r.ts[0]), t_max=float(r.ts[-1]))
    rep.check("ell_spread", r.ell.spread, 1e-3)
    rep.check("reflection_residual", r.reflection_residual, 1e-8)
    rep.check("decay_rate_rel_error", max(abs(r.decay_rate_forward / k - 1), abs(r.decay_rate_backward / k - 1)), 1e-2)
    rep.check("cubic_rel_error", abs(r.cubic.value / r.cubic_prediction - 1), 1e-2)
    if (a.beta1, a.beta2) == (1.0, 0.5):
        oracle = float(np.sqrt(2 * abs(2 * a.S + 1)))
        m["ell_explicit"] = oracle
        rep.check("ell_explicit_error", abs(r.ell.value - oracle), 1e-4)
    if a.profile:
        from .radial import LogTrajectory, energy
        ts, fs, gs = r.ts, r.fs, r.gs
        whole = LogTrajectory(r.params, ts, fs, gs, energy(r.params, fs, gs), tol, True)
        export_profile(whole, a.profile)
    return f"ell = {r.ell.value:.10g}, cubic = {r.cubic.value:.10g} (predicted {r.cubic_prediction:.10g})"


def cmd_field_residual(a, rep):
    lo, hi, m = parse_box(a.box)
    if a.model == "ground":
        n = int(a.n)
        if n != a.n:
            raise UsageError("the grid needs an integer --n")
        r = build_rep(n)
        fn = lambda x: ground_state_spinor(r, a.lam, x=x)  # noqa: E731
        p = GroundState(n)
    else:
        if (a.beta1, a.beta2) != (1.0, 0.5):
            raise UsageError("explicit excited states need --beta1 1 --beta2 0.5")
        n, r = 2, build_rep(2)
        fn = lambda x: excited_spinor(a.S, a.lam, x=x)  # noqa: E731
        p = Graphene2D(1.0, 0.5, a.S)
    grid = GridSpec(n, lo, hi, m)
    F = sample(r, grid, fn)
    res = pde_residual(F, p)
    rep.metrics.update(pde_residual=res, h=grid.h)
    if a.order:
        coarse = pde_residual(sample(r, GridSpec(n, lo, hi, (m + 1) // 2), fn), p)
        order = float(np.log2(coarse / res))
        rep.metrics["order"] = order
        rep.check("order_low", order, 3.8, ">=")
        rep.check("order_high", order, 4.2, "<=")
    rep.check("pde_residual", res, a.threshold)
    if a.out:
        export_field(F, a.out)
    return f"max interior residual {res:.3e} on {m}^{n} nodes"


def cmd_kelvin_verify(a, rep):
    ratio = V.dkelvin_ratio(a.n, a.seed, a.points)
    d_norm, d_quad = V.ground_norm_identities(a.n)
    rep.metrics.update(dkelvin_ratio=ratio, normkelvin_rel_diff=d_norm, quadkelvin_rel_diff=d_quad)
    rep.check("dkelvin_ratio_low", ratio, 12.0, ">=")
    rep.check("dkelvin_ratio_high", ratio, 20.0, "<=")
    rep.check("normkelvin_rel_diff", d_norm, 5e-3)
    rep.check("quadkelvin_rel_diff", d_quad, 5e-3)
    return f"d-kelvin halving ratio {ratio:.3f}; norm identities {d_norm:.2e}, {d_quad:.2e}"


def cmd_green_verify(a, rep):
    r = build_rep(a.n)
    psi = PointSpinorFn(r, lambda x: ground_state_spinor(r, 1.0, x=x))
    pts = np.random.default_rng(a.seed).uniform(-2, 2, size=(a.points, a.n))
    res = verify_integral_equation(psi, GroundState(a.n), pts, order=a.nodes)
    rep.metrics["integral_equation_residual"] = res
    rep.check("integral_equation_residual", res, 1e-2)
    return f"max |psi - Gamma * (h psi)| = {res:.3e} at {a.points} points"


def cmd_fit(a, rep):
    cols = read_columns(a.input)
    r = cols.get("r")
    if r is None:
        raise UsageError(f"{a.input} has no 'r' column")
    if a.column not in cols:
        raise UsageError(f"{a.input} has no column {a.column!r}")
    w = np.abs(cols[a.column])
    lo, hi = parse_range(a.window)
    f = fit_power(r, w, (lo, hi))
    rep.metrics.update(exponent=f.exponent, coefficient=f.coefficient, fit_residual=f.fit_residual,
                       n_samples=f.n_samples)
    rep.check("fit_residual", f.fit_residual, a.max_residual)
    if a.expect is not None:
        rep.check("exponent_rel_error", abs(f.exponent / a.expect - 1), a.rtol)
    if a.out:
        with open(a.out, "w", encoding="ascii") as fh:
            fh.write(rep.to_json())
    return f"{a.column} ~ {f.coefficient:.6g} r^-{f.exponent:.6g} (rms log residual {f.fit_residual:.2e})"


def cmd_verify_all(a, rep):
    V.run_all(rep, quick=a.quick)
    return "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.value:.3e} {c.op} {c.threshold:g}"
                     for c in rep.checks)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="critdirac", description="Critical Dirac equation toolkit")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("clifford", help="build and check the Clifford representation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_clifford)

    for name, func, extra in (("bubble", cmd_bubble, "n"), ("excited", cmd_excited, "S")):
        p = sub.add_parser(name, help=f"sample the explicit {name} profile")
        if extra == "n":
            p.add_argument("--n", type=float, default=2.0)
        else:
            p.add_argument("--S", type=int, required=True)
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--grid", default=DEFAULTS["radial_grid"])
        p.add_argument("--out")
        p.add_argument("--residual-tol", type=float, default=1e-12)
        p.set_defaults(func=func)

    p = sub.add_parser("integrate", help="integrate the log-variable system")
    _model_args(p)
    p.add_argument("--f0", type=float, required=True)
    p.add_argument("--g0", type=float, required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float)
    p.add_argument("--horizon", type=float, default=DEFAULTS["horizon"])
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    p.add_argument("--samples-per-unit", type=int, default=DEFAULTS["samples_per_unit"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("shoot", help="shoot an excited state")
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--beta2", type=float, required=True)
    p.add_argument("--S", type=int, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--floor", type=float, default=DEFAULTS["floor"])
    p.add_argument("--samples-per-unit", type=int, default=DEFAULTS["samples_per_unit"])
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--profile", help="CSV of the shot trajectory")
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("field-residual", help="finite-difference PDE residual on a grid")
    _model_args(p)
    p.add_argument("--box", default=DEFAULTS["box"])
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--order", action="store_true", help="also measure the convergence order")
    p.add_argument("--out", help="CSV export of the sampled field")
    p.set_defaults(func=cmd_field_residual)

    p = sub.add_parser("kelvin-verify", help="check the Kelvin transform identities")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    p.add_argument("--points", type=int, default=20)
    p.set_defaults(func=cmd_kelvin_verify)

    p = sub.add_parser("green-verify", help="check the integral equation with the Green kernel")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--nodes", type=int, default=32, help="Gauss-Legendre nodes per radial panel")
    p.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    p.set_defaults(func=cmd_green_verify)

    p = sub.add_parser("fit", help="fit a power law to a CSV column")
    p.add_argument("--input", required=True)
    p.add_argument("--column", default="u")
    p.add_argument("--window", default=DEFAULTS["window"])
    p.add_argument("--expect", type=float)
    p.add_argument("--rtol", type=float, default=1e-2)
    p.add_argument("--max-residual", type=float, default=1e-2)
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify-all", help="run the whole verification suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify_all)

    for sp in sub.choices.values():
        _common(sp)
    return top


_VALUE_FLAGS = ("--box", "--grid", "--window")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Allow ``--box -6,6,241``: argparse would read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _config_path(argv: Sequence[str]) -> str | None:
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def parse_config(argv: Sequence[str]) -> tuple[argparse.Namespace, RunConfig]:
    """Parse the command line; option values from ``--config`` act as defaults."""
    argv = _join_negative_values(list(argv))
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices if parser._subparsers else {}
    command = next((a for a in argv if a in sub), None)
    path = _config_path(argv)
    if path is not None and command is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        opts = cfg.get("options", cfg)
        sp = sub[command]
        known = {act.dest for act in sp._actions} - _PLUMBING
        bad = sorted(set(opts) - known)
        if bad:
            raise UsageError(f"unknown config keys: {', '.join(bad)}")
        sp.set_defaults(**opts)
        for act in sp._actions:
            if act.dest in opts:
                act.required = False
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    opts = {k: v for k, v in vars(args).items() if k not in _PLUMBING and k != "command"}
    return args, RunConfig(args.command, opts)


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, cfg = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    rep = Report(cfg.command, cfg.to_dict()["options"], version=__version__)
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            summary = args.func(args, rep)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, MemoryError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        rep.wall_time = time.perf_counter() - t0
    text = rep.to_json()
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(text)
    if cfg.command == "shoot" and args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    print(text if args.json else summary, end="" if args.json else "\n")
    for c in rep.failures:
        print(f"check failed: {c.name} = {c.value:.6g} (threshold {c.op} {c.threshold:g})", file=sys.stderr)
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
