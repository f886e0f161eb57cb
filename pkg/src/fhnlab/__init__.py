"""fhnlab: numerical laboratory for cubic reaction-diffusion systems.

Simulation (finite-difference and cosine-Galerkin), Sturm-Liouville spectra
via the Pruefer phase equation, Hopf-cascade stability analysis, and the
diagnostic monitors (energy identities, parity invariance, periodicity,
wave propagation) used to verify the qualitative regimes numerically.
"""
from . import grid, model, sim, spectral, stability, sturm  # noqa: F401
from .errors import (  # noqa: F401
    BlowUpError,
    ConfigError,
    DetectionError,
    FhnLabError,
    GuardError,
    ResolutionError,
    SolverError,
)

__version__ = "0.1.0"
