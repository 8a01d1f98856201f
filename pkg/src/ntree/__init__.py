"""Decorated Newton trees of polynomials in k[[x1..xd]][z] over the rationals."""

from .errors import InternalInconsistency, NTreeError
from .polyring import SparsePoly, parse_poly, to_text
from .tree import NewtonTree, build_tree, canonical_json, from_json, render, to_json
from .pgood import is_pgood, to_pgood

__version__ = "0.1.0"

__all__ = [
    "InternalInconsistency",
    "NTreeError",
    "NewtonTree",
    "SparsePoly",
    "build_tree",
    "canonical_json",
    "from_json",
    "is_pgood",
    "parse_poly",
    "render",
    "to_json",
    "to_pgood",
    "to_text",
]
