"""Solver output type."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet

from src.network.logical_graph import EntanglementPath


class SolverKind(str, Enum):
    GREEDY = "greedy"
    EXACT = "exact"
    RESTRICTED_EXACT = "restricted_exact"


@dataclass
class Solution:
    """Served requests, their paths and solver metadata.

    Attributes:
        served: Indices of served requests.
        paths: Path of each served request, keyed by request index.
        total_reward: Sum of rewards over ``served``.
        solver: Which solver produced this solution.
        proven_optimal: True only for exact solutions whose search finished.
        runtime_s: Wall-clock solve time.
        allow_ground_transit: Whether paths may relay through ground stations.
        nodes_explored: Branch-and-bound nodes evaluated (0 for greedy).
    """

    served: FrozenSet[int]
    paths: Dict[int, EntanglementPath]
    total_reward: int
    solver: SolverKind
    proven_optimal: bool = False
    runtime_s: float = 0.0
    allow_ground_transit: bool = False
    nodes_explored: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        return {
            "solver": self.solver.value,
            "served": sorted(self.served),
            "paths": {str(i): self.paths[i].to_dict() for i in sorted(self.paths)},
            "total_reward": self.total_reward,
            "proven_optimal": self.proven_optimal,
            "runtime_s": self.runtime_s,
            "nodes_explored": self.nodes_explored,
        }
