"""
OED solvers.

This package provides the greedy and exact (optionally ISL-free) solvers,
flow-to-path extraction and independent solution verification.
"""

from .exact import exact_solve
from .greedy import bfs_path, greedy_solve
from .path_model import PathModel
from .paths import FlowAssignment, extract_paths
from .solution import Solution, SolverKind
from .verify import VerificationReport, Violation, verify_solution

__all__ = [
    "FlowAssignment",
    "PathModel",
    "Solution",
    "SolverKind",
    "VerificationReport",
    "Violation",
    "bfs_path",
    "exact_solve",
    "extract_paths",
    "greedy_solve",
    "verify_solution",
]
