"""Exact finite computations in pants graphs of punctured spheres."""
from .curves import CurveClass, SphereModel, geometric_intersection, round_curve
from .geometry import extract, fills_check, realize
from .mapclass import MCWord, apply_word, block_transposition, dehn_twist
from .pantsgraph import PantsSubgraph, PantsVertex, ball, make_vertex, validate_vertex
from .rigidset import build_X, build_X5, build_Z, gamma

__all__ = [
    "CurveClass", "SphereModel", "geometric_intersection", "round_curve",
    "extract", "fills_check", "realize",
    "MCWord", "apply_word", "block_transposition", "dehn_twist",
    "PantsSubgraph", "PantsVertex", "ball", "make_vertex", "validate_vertex",
    "build_X", "build_X5", "build_Z", "gamma",
]
__version__ = "0.1.0"
