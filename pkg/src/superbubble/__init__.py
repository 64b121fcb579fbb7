"""Superbubble detection in directed acyclic graphs, in linear time."""
from ._accel import BACKEND, HAS_NUMBA
from .detector import Superbubble, SuperbubbleReport, detect, trace_detect
from .errors import (
    CycleError,
    NotDagError,
    OracleCapError,
    ParseError,
    SelfLoopError,
    SuperbubbleError,
)
from .graph import AugmentedGraph, Graph, augment, export_dot, load_edge_list
from .oracle import enumerate_superbubbles
from .topo import TopoOrder, topological_sort

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "AugmentedGraph",
    "CycleError",
    "Graph",
    "NotDagError",
    "OracleCapError",
    "ParseError",
    "SelfLoopError",
    "Superbubble",
    "SuperbubbleError",
    "SuperbubbleReport",
    "TopoOrder",
    "augment",
    "detect",
    "enumerate_superbubbles",
    "export_dot",
    "load_edge_list",
    "topological_sort",
    "trace_detect",
]
__version__ = "0.1.0"
