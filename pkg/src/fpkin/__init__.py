"""Kinetic-theory toolkit for a nonlinear Fokker-Planck model with boson,
fermion and classical statistics.

Subpackages
-----------
specfun
    Gamma-based constants, Gaussian radial moments and the L-function
    family evaluated by series and by adaptive quadrature.
equilibrium
    Global Maxwellians at fixed total density: the normalization constant,
    energy/entropy/free-energy closed forms, small-k expansions and
    ordering sweeps.
kinetics
    Grid solver for the space-inhomogeneous equation in one space and one
    velocity dimension, with moments, entropy, free-energy-gap and
    boundary-flux diagnostics.  The hot stepping kernel is compiled
    (Cython) when available, with a NumPy fallback selected at import.
cli
    Command-line front end (``fpkin equilibrium | sweep | simulate |
    verify``).
"""

from . import backends, equilibrium, kinetics, specfun  # noqa: F401

__version__ = "0.1.0"
