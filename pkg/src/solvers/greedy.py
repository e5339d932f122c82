"""Greedy OED solver.

Requests are considered in non-increasing reward/demand order (ties by
batch index). Each request is routed on a minimum-hop path of the current
residual graph, found by breadth-first search; when a path exists its
resources are reserved before the next request is considered.
"""

import logging
import time
from collections import deque
from typing import Dict, List, Optional, Sequence

from src.network.logical_graph import EntanglementPath, LogicalGraph, ResourceProfile
from src.network.requests import Request, RequestBatch
from src.solvers.solution import Solution, SolverKind

logger = logging.getLogger(__name__)


def bfs_path(
    g: LogicalGraph,
    s: int,
    t: int,
    d: int,
    allow_ground_transit: bool = False,
) -> Optional[EntanglementPath]:
    """Minimum-hop ``s``-``t`` path able to carry demand ``d`` right now.

    Only edges with at least ``d`` residual channels are used. The source
    must hold ``d`` transmitters and memories, the destination ``d``
    receivers and memories, every intermediate ``d`` transmitters, ``d``
    receivers and ``2d`` memories. Intermediates are satellites unless
    ``allow_ground_transit``. Neighbors are expanded in ascending id order.

    Returns:
        The path, or None if no such path exists.
    """
    if s == t:
        raise ValueError(f"Source and destination are the same vertex {s}")
    if not g.resources(s).covers(ResourceProfile(d, 0, d)):
        return None
    sink_need = ResourceProfile(0, d, d)
    relay_need = ResourceProfile(d, d, 2 * d)

    parent: Dict[int, int] = {s: s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v in parent or g.channels(u, v) < d:
                continue
            if v == t:
                if not g.resources(t).covers(sink_need):
                    return None
                parent[t] = u
                return EntanglementPath(_trace(parent, t), d)
            if g.is_ground(v) and not allow_ground_transit:
                continue
            if not g.resources(v).covers(relay_need):
                continue
            parent[v] = u
            queue.append(v)
    return None


def _trace(parent: Dict[int, int], t: int) -> List[int]:
    path = [t]
    while parent[path[-1]] != path[-1]:
        path.append(parent[path[-1]])
    return path[::-1]


def greedy_order(requests: Sequence[Request]) -> List[Request]:
    """Requests sorted by non-increasing reward/demand, then batch index."""
    return sorted(requests, key=lambda r: (-r.ratio, r.index))


def route_in_order(
    g: LogicalGraph,
    requests: Sequence[Request],
    allow_ground_transit: bool = False,
) -> Dict[int, EntanglementPath]:
    """Route ``requests`` one by one on a residual copy of ``g``, in the given order."""
    residual = g.copy()
    paths: Dict[int, EntanglementPath] = {}
    for request in requests:
        path = bfs_path(residual, request.src, request.dst, request.demand, allow_ground_transit)
        if path is None:
            continue
        residual.reserve_path(path)
        paths[request.index] = path
    return paths


def greedy_solve(
    g: LogicalGraph,
    batch: RequestBatch,
    allow_ground_transit: bool = False,
) -> Solution:
    """Serve requests greedily on a residual copy of ``g``.

    Args:
        g: Logical graph; it is not modified.
        batch: Requests to serve.
        allow_ground_transit: Whether ground stations may relay.

    Returns:
        A feasible solution (possibly serving nothing).
    """
    start = time.perf_counter()
    paths = route_in_order(g, greedy_order(batch.requests), allow_ground_transit)
    rewards = {r.index: r.reward for r in batch.requests}
    solution = Solution(
        served=frozenset(paths),
        paths=paths,
        total_reward=sum(rewards[i] for i in paths),
        solver=SolverKind.GREEDY,
        proven_optimal=False,
        runtime_s=time.perf_counter() - start,
        allow_ground_transit=allow_ground_transit,
    )
    logger.debug(
        f"Greedy served {len(paths)}/{len(batch)} requests, reward {solution.total_reward}"
    )
    return solution
