"""quiveralg: graded quiver algebras over exact rationals.

Presentations with homogeneous relations, degree-wise quotient bases, cyclic
words and superpotentials, a reduced bar model with homotopy transfer to
minimal A-infinity structures, algebra reconstruction and cyclic completion,
Maurer-Cartan checks over nilpotent augmented algebras, and representation-
space verification (critical locus, Hessian symmetry, theta-stability).
"""

from .quivers import (
    InvalidRelation,
    NCPoly,
    Path,
    PathCapError,
    Presentation,
    Quiver,
    QuiverAlgError,
    multiply,
)

__all__ = [
    "InvalidRelation",
    "NCPoly",
    "Path",
    "PathCapError",
    "Presentation",
    "Quiver",
    "QuiverAlgError",
    "multiply",
]

__version__ = "0.1.0"
