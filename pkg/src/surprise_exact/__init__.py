"""Exact evaluation and optimisation of the surprise clustering measure."""

from .corpus import load
from .graph import Clustering, Graph, GraphFormatError, parse_graph
from .minip import EdgeMode, MinIPProblem, MinIPSolution, Objective, Status, TieMode, solve
from .surprise import SurpriseValue, evaluate, surprise_of
from .sweep import SweepConfig, SweepReport, Variant, optimize, optimize_auto
from .treedp import macp_tree, surprise_optimal_forest, surprise_optimal_tree

__all__ = [
    "Clustering",
    "EdgeMode",
    "Graph",
    "GraphFormatError",
    "MinIPProblem",
    "MinIPSolution",
    "Objective",
    "Status",
    "SurpriseValue",
    "SweepConfig",
    "SweepReport",
    "TieMode",
    "Variant",
    "evaluate",
    "load",
    "macp_tree",
    "optimize",
    "optimize_auto",
    "parse_graph",
    "solve",
    "surprise_of",
    "surprise_optimal_forest",
    "surprise_optimal_tree",
]
