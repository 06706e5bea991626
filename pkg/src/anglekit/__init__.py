"""Finite-truncation numerics for quantum angle operators.

Three constructions of an angle operator conjugate to a number operator,
realized as dense matrices at desk scale: the half-circle route through
ArcCos of a shift cosine, Weyl-Heisenberg integral quantization of the
sawtooth on the plane, and coherent-state quantization on the cylinder.
Every identity the constructions are supposed to satisfy is measurable
through the check suites (see anglekit.checks and the CLI).
"""

from .errors import (
    BasisMismatchError,
    ConvergenceError,
    DomainError,
    QuadratureWarning,
    TruncationWarning,
)
from .linalg import BasisSpec, EigenSystem, TruncatedOperator

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "EigenSystem",
    "TruncatedOperator",
    "BasisMismatchError",
    "ConvergenceError",
    "DomainError",
    "QuadratureWarning",
    "TruncationWarning",
    "__version__",
]
