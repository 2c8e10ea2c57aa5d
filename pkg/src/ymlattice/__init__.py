"""Cochain-level Yang-Mills phase spaces on a periodic cubical lattice.

Algebra-valued cochains with an associative cup product, the covariant
derivative and its Green operator, the three symplectic phase spaces with
their moment maps, the Clebsch parametrization, and structure-preserving
integrators.
"""

from .errors import (
    ConfigError,
    ConstraintViolation,
    ConvergenceError,
    DegenerateLattice,
    DegreeError,
    FormatError,
    IrreducibilityError,
    NumericalBlowup,
    YMLatticeError,
)
from .kernels import BACKEND
from .lattice import AlgCochain, CubicalComplex3, build_torus

__version__ = "0.1.0"

__all__ = [
    "AlgCochain",
    "BACKEND",
    "ConfigError",
    "ConstraintViolation",
    "ConvergenceError",
    "CubicalComplex3",
    "DegenerateLattice",
    "DegreeError",
    "FormatError",
    "IrreducibilityError",
    "NumericalBlowup",
    "YMLatticeError",
    "build_torus",
]
