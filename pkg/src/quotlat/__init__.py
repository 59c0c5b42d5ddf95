"""Exact classification of lattice quotient codes and their invariants."""

from .codes import Code, parse_code
from .feasibility import build_geometry, feasibility
from .faces import face_invariants, traverse_face
from .lattices import GramMatrix, parse_gram

__all__ = [
    "Code", "GramMatrix", "build_geometry", "face_invariants", "feasibility",
    "parse_code", "parse_gram", "traverse_face",
]
__version__ = "0.1.0"
