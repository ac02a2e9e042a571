"""Exact dynamics of piecewise linear maps on finite metric graphs."""

from .decomposition import Params, build_semiconjugacy, decompose, verify_corollaries
from .graph import EdgePoint, Graph, Vertex, validate_graph
from .plmap import PLMap, compose, image, power, preimage, validate_map
from .sets import ArcSet, OpenArcSet
from .sysfile import parse_system, print_system

__version__ = "0.1.0"
