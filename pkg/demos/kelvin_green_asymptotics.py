"""Inversion symmetry, the integral equation and the decay dichotomy.

Run with ``python demos/kelvin_green_asymptotics.py``.
"""
import numpy as np

from critdirac.asymptotics import extract_leading_spinor, leading_decay
from critdirac.clifford import build_rep
from critdirac.closed_form import excited_spinor, ground_state_spinor
from critdirac.kelvin_green import PointSpinorFn, verify_integral_equation, verify_norm_identities
from critdirac.params import GroundState

rep = build_rep(2)
bubble = PointSpinorFn(rep, lambda x: ground_state_spinor(rep, 2.0, x=x))
print("norm identities (relative differences):", verify_norm_identities(bubble))

unit = PointSpinorFn(rep, lambda x: ground_state_spinor(rep, 1.0, x=x))
pts = np.array([[0.0, 0.0], [0.5, -1.0], [2.0, 1.5]])
print(f"integral equation residual: {verify_integral_equation(unit, GroundState(2), pts):.2e}")

lead = extract_leading_spinor(unit, 1e3)
print(f"bubble: Psi = {lead.Psi}, |Psi| = {lead.norm:.6f}, stable = {lead.stable}")

ex = PointSpinorFn(rep, lambda x: excited_spinor(1, x=x))
fit = leading_decay(ex)
print(f"S=1 state: leading estimate decays like R^-{fit.exponent:.4f}")
