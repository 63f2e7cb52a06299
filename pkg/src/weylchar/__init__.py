"""Exact characters of compact simple Lie groups at torus points.

Core surfaces:

- `rootsys`: root systems, exact inner products, Dynkin combinatorics
- `weylgroup`: reflection-group enumeration, stabilizers, coset transversals
- `charcalc`: dimensions, regular/singular Weyl characters, weight-sum oracle
- `asymptotics`: normalized-character decay sweeps and divergence certificates
- `spectral`: averaging-operator moments against the Kesten-McKay law
- `cli`: the `weylchar` command-line front end
"""

from .rootsys import RootSystem, RootSystemSpec, build_root_system
from .torus import TorusPoint, exact_point, float_point, zero_point

__all__ = [
    "RootSystem",
    "RootSystemSpec",
    "build_root_system",
    "TorusPoint",
    "exact_point",
    "float_point",
    "zero_point",
]
__version__ = "0.1.0"
