"""The single table of defaults used by the command line and the verification suite.

=================  ==================  ==============================================
key                value               meaning
=================  ==================  ==============================================
tol                1e-10               integrator relative tolerance (``integrate``)
shoot_tol          1e-13               integrator relative tolerance (``shoot``)
horizon            15.0                |t| range for ``integrate``; upper bound for ``shoot``
floor              1e-6                amplitude at which shooting stops
samples_per_unit   20                  output samples per unit of t
window             "1e2:1e3"           fitting window for power laws
radial_grid        "1e-2:1e2:200:log"  radial grid for profile export
box                "-6,6,241"          cube [lo, hi]^n with m nodes per axis
seed               0                   random seed for sampled test points
=================  ==================  ==============================================
"""
from __future__ import annotations

DEFAULTS: dict[str, object] = {
    "tol": 1e-10,
    "shoot_tol": 1e-13,
    "horizon": 15.0,
    "floor": 1e-6,
    "samples_per_unit": 20,
    "window": "1e2:1e3",
    "radial_grid": "1e-2:1e2:200:log",
    "box": "-6,6,241",
    "seed": 0,
}
