"""Randomized decision procedures for generic local and global rigidity of graphs."""

from .config import TestConfig
from .engine import (
    Certainty,
    Verdict,
    VerdictKind,
    check_dimension_one,
    check_global,
    check_hendrickson,
    check_local,
    dot_space_dim,
    gauss_rank,
    k_min_estimate,
    k_sh_estimate,
    oracle_check_global_rational,
)
from .graph import Graph, delete_edge, format_graph, generate, parse_graph, vertex_connectivity_at_least
from .report import RigidityReport, analyze

__version__ = "0.1.0"
