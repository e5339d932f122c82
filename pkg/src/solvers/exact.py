"""Exact OED solver.

The default backend is a best-first branch-and-bound over request
admission. Each node fixes some requests in or out and is bounded by
column generation on the path formulation of
:mod:`src.solvers.path_model`: paths are generated per request only when
their dual prices make them worth adding. The greedy solution seeds the
incumbent, and two heuristics improve it: an integer master over the
pooled paths at the root, and re-routing in the order the relaxation
favours. Nodes are ordered by bound, deeper nodes first on ties.

When a node's relaxation admits whole requests but splits them across
paths, branching on admission cannot separate it further. That node is
then solved outright on the arc-flow model with ``scipy.optimize.milp``.

``backend="milp"`` hands the whole arc-flow model of
:mod:`src.solvers.flow_model` to ``scipy.optimize.milp`` instead.
"""

import heapq
import itertools
import logging
import time
from typing import Dict, FrozenSet, Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from src.network.logical_graph import EntanglementPath, LogicalGraph
from src.network.requests import RequestBatch
from src.solvers.flow_model import INTEGRALITY_TOL, FlowModel, build_flow_model
from src.solvers.greedy import greedy_order, greedy_solve, route_in_order
from src.solvers.path_model import PathModel, floor_bound
from src.solvers.paths import extract_paths
from src.solvers.solution import Solution, SolverKind

logger = logging.getLogger(__name__)

BACKENDS = ("bnb", "milp")


class _Incumbent:
    """Best feasible assignment found so far."""

    def __init__(self, paths: Dict[int, EntanglementPath], rewards: Dict[int, int]):
        self.rewards = rewards
        self.paths = paths
        self.reward = self._value(paths)

    def _value(self, paths: Dict[int, EntanglementPath]) -> int:
        return sum(self.rewards[i] for i in paths)

    def offer(self, paths: Dict[int, EntanglementPath], source: str) -> bool:
        value = self._value(paths)
        if value <= self.reward:
            return False
        logger.debug(f"New incumbent from {source}: reward {value} (was {self.reward})")
        self.paths, self.reward = paths, value
        return True


def _time_left(deadline: Optional[float]) -> Optional[float]:
    return None if deadline is None else deadline - time.perf_counter()


def _repair(
    base: LogicalGraph,
    batch: RequestBatch,
    admitted: Dict[int, float],
    allow_ground_transit: bool,
) -> Dict[int, EntanglementPath]:
    """Route requests the relaxation admits (x >= 0.5) first, the rest after."""
    ordered = greedy_order(batch.requests)
    ordered.sort(key=lambda r: admitted.get(r.index, 0.0) < 0.5)
    return route_in_order(base, ordered, allow_ground_transit)


def _most_fractional(x: np.ndarray, free: np.ndarray) -> int:
    """Free request position whose admission is closest to 0.5, or -1."""
    gap = np.where(free, np.abs(x - np.rint(x)), 0.0)
    if gap.size == 0:
        return -1
    p = int(np.argmax(gap))
    return p if gap[p] > INTEGRALITY_TOL else -1


def _milp(
    model: FlowModel,
    g: LogicalGraph,
    batch: RequestBatch,
    incumbent: _Incumbent,
    deadline: Optional[float],
    lower: Optional[np.ndarray] = None,
) -> bool:
    """Solve ``model`` with HiGHS; True if it finished (optimal or infeasible)."""
    lower = np.zeros(model.num_vars) if lower is None else lower
    if np.any(lower > model.upper):
        return True
    constraints = []
    if model.a_eq.shape[0]:
        constraints.append(LinearConstraint(model.a_eq, model.b_eq, model.b_eq))
    if model.a_ub.shape[0]:
        constraints.append(LinearConstraint(model.a_ub, -np.inf, model.b_ub))
    options = {}
    if deadline is not None:
        options["time_limit"] = max(deadline - time.perf_counter(), 1e-3)

    result = milp(
        model.c,
        constraints=constraints,
        integrality=np.ones(model.num_vars),
        bounds=Bounds(lower, model.upper),
        options=options,
    )
    if result.x is not None:
        incumbent.offer(extract_paths(model.assignment(result.x), g, batch), "milp")
    if result.status in (0, 2):
        return True
    logger.warning(f"MILP backend stopped early: {result.message}")
    return False


def _solve_node(
    model: PathModel,
    g: LogicalGraph,
    batch: RequestBatch,
    fixed_in: FrozenSet[int],
    fixed_out: FrozenSet[int],
    incumbent: _Incumbent,
    allow_isl: bool,
    allow_ground_transit: bool,
    deadline: Optional[float],
) -> bool:
    """Solve every completion of a node exactly; True if that finished."""
    requests = [r for p, r in enumerate(model.requests) if p not in fixed_out]
    forced = {model.requests[p].index for p in fixed_in}
    flow = build_flow_model(g, requests, allow_isl, allow_ground_transit)
    lower = np.zeros(flow.num_vars)
    for j, r in enumerate(requests):
        if r.index in forced:
            lower[j] = 1.0
    logger.debug(
        f"Solving node exactly: {len(forced)} fixed in, {len(fixed_out)} fixed out"
    )
    return _milp(flow, g, batch, incumbent, deadline, lower)


def _branch_and_price(
    model: PathModel,
    g: LogicalGraph,
    base: LogicalGraph,
    batch: RequestBatch,
    incumbent: _Incumbent,
    allow_isl: bool,
    allow_ground_transit: bool,
    deadline: Optional[float],
):
    """Run the search; returns ``(proven_optimal, nodes_explored)``."""
    counter = itertools.count()
    empty: FrozenSet[int] = frozenset()
    heap = [(-float(model.routable_reward()), 0, next(counter), empty, empty)]
    explored = 0
    exhaustive = True

    while heap:
        if deadline is not None and time.perf_counter() >= deadline:
            logger.warning(
                f"Exact solver time limit reached after {explored} nodes, "
                f"returning incumbent reward {incumbent.reward}"
            )
            return False, explored

        neg_parent, neg_depth, _, fixed_in, fixed_out = heapq.heappop(heap)
        if floor_bound(-neg_parent) <= incumbent.reward:
            continue

        relax = model.relax(fixed_in, fixed_out, incumbent.reward, deadline)
        explored += 1
        if relax is None:
            if deadline is not None and time.perf_counter() >= deadline:
                heapq.heappush(heap, (neg_parent, neg_depth, next(counter), fixed_in, fixed_out))
                continue
            logger.warning("Node relaxation failed, node dropped")
            exhaustive = False
            continue

        bound = min(-neg_parent, relax.bound)
        if floor_bound(bound) <= incumbent.reward:
            continue
        if relax.selection is not None:
            incumbent.offer(relax.selection, "relaxation")
            if floor_bound(bound) <= incumbent.reward:
                continue

        if explored == 1:
            incumbent.offer(model.best_combination(time_left=_time_left(deadline)), "path pool")
        admitted = {r.index: relax.admitted[p] for p, r in enumerate(model.requests)}
        incumbent.offer(_repair(base, batch, admitted, allow_ground_transit), "repair")
        if floor_bound(bound) <= incumbent.reward:
            continue

        free = model.routable.copy()
        free[list(fixed_in | fixed_out)] = False
        pick = _most_fractional(relax.admitted, free)
        if pick < 0:
            incumbent.offer(
                model.best_combination(fixed_in, fixed_out, _time_left(deadline)), "path pool"
            )
            if floor_bound(bound) <= incumbent.reward:
                continue
            if not _solve_node(
                model, g, batch, fixed_in, fixed_out, incumbent,
                allow_isl, allow_ground_transit, deadline,
            ):
                exhaustive = False
            continue

        depth = -neg_depth + 1
        for child_in, child_out in (
            (fixed_in | {pick}, fixed_out),
            (fixed_in, fixed_out | {pick}),
        ):
            heapq.heappush(heap, (-bound, -depth, next(counter), child_in, child_out))

    return exhaustive, explored


def exact_solve(
    g: LogicalGraph,
    batch: RequestBatch,
    allow_isl: bool = True,
    allow_ground_transit: bool = False,
    time_limit_s: Optional[float] = None,
    backend: str = "bnb",
) -> Solution:
    """Reward-maximizing set of requests with one feasible path each.

    Args:
        g: Logical graph; it is not modified.
        batch: Requests to serve.
        allow_isl: If False, no path may use a satellite-satellite edge
            (the restricted variant).
        allow_ground_transit: Whether ground stations may relay.
        time_limit_s: Wall-clock limit; when it fires the best solution
            found so far is returned with ``proven_optimal`` False.
        backend: ``"bnb"`` (built-in branch-and-bound) or ``"milp"``.

    Returns:
        The solution, tagged EXACT or RESTRICTED_EXACT.
    """
    if backend not in BACKENDS:
        raise ValueError(f"Unknown exact backend '{backend}', expected one of {BACKENDS}")
    start = time.perf_counter()
    deadline = None if time_limit_s is None else start + time_limit_s
    kind = SolverKind.EXACT if allow_isl else SolverKind.RESTRICTED_EXACT
    base = g if allow_isl else g.without_isl()

    rewards = {r.index: r.reward for r in batch.requests}
    incumbent = _Incumbent(greedy_solve(base, batch, allow_ground_transit).paths, rewards)

    explored = 0
    if backend == "milp":
        flow = build_flow_model(g, batch.requests, allow_isl, allow_ground_transit)
        if incumbent.reward >= flow.routable_reward():
            proven = True
        else:
            proven = _milp(flow, g, batch, incumbent, deadline)
    else:
        model = PathModel(g, batch.requests, allow_isl, allow_ground_transit)
        if incumbent.reward >= model.routable_reward():
            proven = True
        else:
            proven, explored = _branch_and_price(
                model, g, base, batch, incumbent, allow_isl, allow_ground_transit, deadline
            )

    solution = Solution(
        served=frozenset(incumbent.paths),
        paths=dict(incumbent.paths),
        total_reward=incumbent.reward,
        solver=kind,
        proven_optimal=proven,
        runtime_s=time.perf_counter() - start,
        allow_ground_transit=allow_ground_transit,
        nodes_explored=explored,
    )
    logger.debug(
        f"{kind.value}: reward {solution.total_reward} of {batch.total_reward}, "
        f"{explored} nodes, optimal={proven}, {solution.runtime_s:.3f}s"
    )
    return solution
