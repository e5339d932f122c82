"""Solution verification module.

This module checks solver outputs against the feasibility rules of the
OED problem, independently of the solver that produced them: total
consumption of all paths is compared against the pristine graph, so the
verdict does not depend on the order in which paths were reserved.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src.network.logical_graph import LogicalGraph, consumed_resources, edge_key
from src.network.requests import RequestBatch
from src.solvers.solution import Solution, SolverKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """One failed check.

    Attributes:
        kind: Machine-readable category, e.g. ``channel_capacity``.
        request: Offending request index, or None for shared resources.
        detail: Human-readable explanation.
    """

    kind: str
    request: Optional[int]
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "request": self.request, "detail": self.detail}


@dataclass
class VerificationReport:
    """Outcome of verifying one solution; truthy iff there are no violations."""

    solver: str
    violations: List[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return not self.violations

    def add(self, kind: str, request: Optional[int], detail: str) -> None:
        self.violations.append(Violation(kind, request, detail))

    def kinds(self) -> List[str]:
        return sorted({v.kind for v in self.violations})

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "valid": bool(self),
            "violations": [v.to_dict() for v in self.violations],
        }


class SolutionVerifier:
    """Verifies solutions against a pristine logical graph.

    Checks per path: the request exists, endpoints match, the path is
    simple and follows edges of the graph, ground stations are not used as
    relays unless the solution allows it, and no ISL is used by a
    restricted solution or when ``allow_isl`` is False. Checks over all
    paths: summed channel use per edge and summed transmitter, receiver and
    memory use per vertex stay within the budgets of the graph. Finally
    ``total_reward`` must equal the reward of the served requests.

    Attributes:
        graph: The pristine logical graph the solution was computed on.
        batch: The request batch.

    Example:
        >>> verifier = SolutionVerifier(g, batch)
        >>> report = verifier.verify(solution)
        >>> if not report:
        ...     print(report.kinds())
    """

    def __init__(self, graph: LogicalGraph, batch: RequestBatch):
        self.graph = graph
        self.batch = batch
        self._requests = {r.index: r for r in batch.requests}

    def verify(self, sol: Solution, allow_isl: bool = True) -> VerificationReport:
        report = VerificationReport(sol.solver.value)
        if sol.solver is SolverKind.RESTRICTED_EXACT:
            allow_isl = False

        if set(sol.paths) != set(sol.served):
            report.add(
                "path_set_mismatch",
                None,
                f"served {sorted(sol.served)} but paths for {sorted(sol.paths)}",
            )

        usable = []
        for i in sorted(sol.paths):
            if self._check_path(i, sol, allow_isl, report):
                usable.append(sol.paths[i])

        self._check_capacity(usable, report)

        expected = sum(self._requests[i].reward for i in sol.served if i in self._requests)
        if sol.total_reward != expected:
            report.add(
                "reward_mismatch",
                None,
                f"total_reward {sol.total_reward}, served rewards sum to {expected}",
            )

        self._log_summary(sol, report)
        return report

    def _check_path(self, i: int, sol: Solution, allow_isl: bool, report: VerificationReport) -> bool:
        """Per-path checks; True if the path can be counted against capacities."""
        request = self._requests.get(i)
        if request is None:
            report.add("unknown_request", i, f"no request with index {i} in the batch")
            return False

        path = sol.paths[i]
        ok = True
        if path.demand != request.demand:
            report.add("endpoint_mismatch", i, f"path demand {path.demand}, request demand {request.demand}")
            ok = False
        if len(path.vertices) < 2:
            report.add("endpoint_mismatch", i, f"path {list(path.vertices)} has fewer than two vertices")
            return False
        if (path.source, path.destination) != (request.src, request.dst):
            report.add(
                "endpoint_mismatch",
                i,
                f"path runs {path.vertices[0]}..{path.vertices[-1]}, request is {request.src}->{request.dst}",
            )
            ok = False
        if not path.is_simple():
            report.add("not_simple", i, f"path {path.vertices} repeats a vertex")

        for u, v in path.hops:
            if not self.graph.has_edge(u, v):
                report.add("missing_edge", i, f"({u}, {v}) is not an edge of the graph")
                ok = False
            elif not allow_isl and self.graph.is_isl(u, v):
                report.add("isl_forbidden", i, f"({u}, {v}) is an inter-satellite link")

        if not sol.allow_ground_transit:
            relays = [v for v in path.intermediates if self.graph.is_ground(v)]
            if relays:
                report.add("ground_transit", i, f"ground stations {relays} used as relays")
        return ok

    def _check_capacity(self, paths, report: VerificationReport) -> None:
        channel_use: Dict[tuple, int] = Counter()
        for path in paths:
            for u, v in path.hops:
                channel_use[edge_key(u, v)] += path.demand

        for (u, v), used in sorted(channel_use.items()):
            have = self.graph.channels(u, v)
            if used > have:
                report.add("channel_capacity", None, f"edge ({u}, {v}) uses {used} of {have} channels")

        for v, used in sorted(consumed_resources(paths).items()):
            have = self.graph.resources(v)
            for kind, need, budget in (
                ("transmitters", used.transmitters, have.transmitters),
                ("receivers", used.receivers, have.receivers),
                ("memories", used.memories, have.memories),
            ):
                if need > budget:
                    report.add(kind, None, f"vertex {v} uses {need} of {budget} {kind}")

    def _log_summary(self, sol: Solution, report: VerificationReport) -> None:
        if report:
            logger.debug(
                f"{report.solver}: {len(sol.served)} paths verified, reward {sol.total_reward}"
            )
            return
        logger.warning(f"{report.solver}: {len(report.violations)} verification issue(s)")
        for violation in report.violations:
            logger.warning(f"  - [{violation.kind}] request {violation.request}: {violation.detail}")


def verify_solution(
    g0: LogicalGraph,
    batch: RequestBatch,
    sol: Solution,
    allow_isl: bool = True,
) -> VerificationReport:
    """Verify ``sol`` against the pristine graph ``g0``.

    Returns:
        A report that is truthy iff the solution is feasible and its
        reward is consistent.
    """
    return SolutionVerifier(g0, batch).verify(sol, allow_isl=allow_isl)
