"""Clifford matrices, the ground-state bubble and its action.

Run with ``python demos/bubbles_and_clifford.py``.
"""
import numpy as np

from critdirac.clifford import build_rep, verify_rep
from critdirac.closed_form import action_value, ground_state_radial, ground_state_spinor
from critdirac.field import GridSpec, action, pde_residual, sample
from critdirac.params import GroundState

for n in range(2, 9):
    rep = build_rep(n)
    print(f"n={n}: N={rep.N}, worst identity residual {max(verify_rep(rep).values()):.1e}")

# radial profile of the bubble, and how fast it decays
P = ground_state_radial(2)
rs = np.geomspace(1e-2, 1e3, 6)
for r, u, v in zip(rs, P.u(rs), P.v(rs)):
    print(f"r={r:9.3g}  U={u:.4e}  V={v:.4e}  r*V={r * v:.4e}")

rep = build_rep(2)
for lam in (0.5, 1.0, 2.0):
    F = sample(rep, GridSpec(2, -6, 6, 241), lambda x: ground_state_spinor(rep, lam, x=x))
    tail = ground_state_radial(2, lam).profile(np.geomspace(5.9, 1e4, 20000))
    S = action(F, GroundState(2), tail=tail)
    print(f"lambda={lam}: action {S:.6f} (exact {action_value(2):.6f}), "
          f"PDE residual {pde_residual(F, GroundState(2)):.2e}")
