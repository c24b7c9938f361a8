"""Numerical toolkit for the critical Dirac equation on R^n.

Modules
-------
clifford      Clifford representations, the Dirac symbol and inversion matrices
closed_form   explicit bubbles, excited states and the singular solution
radial        logarithmic-variable radial systems, energy and integration
shooting      shooting for excited states of the planar model
field         finite-difference Dirac operator and quadrature on grids
kelvin_green  Kelvin transform identities and the Green kernel
asymptotics   decay exponents and leading / subleading coefficients
cli           command line interface
"""
__version__ = "0.1.0"
