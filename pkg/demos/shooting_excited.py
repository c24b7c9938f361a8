"""Shooting for excited states in the graphene model.

Run with ``python demos/shooting_excited.py``.
"""
import numpy as np

from critdirac.closed_form import excited_explicit
from critdirac.shooting import shoot

# the explicit S=1 state serves as an oracle for the shooting method
r = shoot(1.0, 0.5, 1)
P = excited_explicit(1)
rr = np.exp(r.ts)
err = np.abs(r.fs - np.sqrt(rr) * P.u(rr)).max()
print(f"S=1 oracle: sup |f - f_exact| = {err:.2e}, ell = {r.ell.value:.12f} vs sqrt 6 = {np.sqrt(6):.12f}")

for b1, b2, S in [(2.0, 0.3, 1), (0.7, 1.1, -2), (1.0, 0.0, 2), (0.5, 2.0, -1)]:
    r = shoot(b1, b2, S)
    print(f"beta=({b1}, {b2}) S={S:+d}: ell={r.ell.value:.6f}, "
          f"cubic {r.cubic.value:+.6f} vs {r.cubic_prediction:+.6f}, "
          f"decay rates {r.decay_rate_forward:.4f}/{r.decay_rate_backward:.4f} (|S+1/2|={abs(S + 0.5)}), "
          f"reflection {r.reflection_residual:.1e}")
