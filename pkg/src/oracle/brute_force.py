"""Exhaustive OED optimum for tiny instances."""

import logging
import math
from typing import List, Optional, Sequence

import networkx as nx

from src.exceptions import OracleLimitError
from src.network.logical_graph import EntanglementPath, LogicalGraph
from src.network.requests import Request, RequestBatch

logger = logging.getLogger(__name__)

MAX_VERTICES = 8
MAX_REQUESTS = 3


def _candidate_paths(
    g: LogicalGraph,
    request: Request,
    allow_isl: bool,
    allow_ground_transit: bool,
) -> List[EntanglementPath]:
    paths = []
    for vertices in nx.all_simple_paths(g.graph, request.src, request.dst):
        path = EntanglementPath(vertices, request.demand)
        if not allow_ground_transit and any(g.is_ground(v) for v in path.intermediates):
            continue
        if not allow_isl and any(g.is_isl(u, v) for u, v in path.hops):
            continue
        paths.append(path)
    return paths


def _best(
    g: LogicalGraph,
    options: Sequence[Sequence[Optional[EntanglementPath]]],
    requests: Sequence[Request],
    depth: int,
) -> int:
    """Max reward over path choices for ``requests[depth:]`` on residual ``g``."""
    if depth == len(requests):
        return 0
    best = 0
    for path in options[depth]:
        if path is None:
            best = max(best, _best(g, options, requests, depth + 1))
            continue
        if not g.check_path_feasible(path):
            continue
        g.reserve_path(path)
        best = max(best, requests[depth].reward + _best(g, options, requests, depth + 1))
        g.release_path(path)
    return best


def brute_force_oed(
    g: LogicalGraph,
    batch: RequestBatch,
    allow_isl: bool = True,
    allow_ground_transit: bool = False,
) -> int:
    """Optimal OED reward by enumerating every subset and path assignment.

    Each request is either skipped or routed on one of its simple paths;
    assignments are replayed with :meth:`LogicalGraph.reserve_path` and
    :meth:`LogicalGraph.release_path` on a copy of ``g``.

    Raises:
        OracleLimitError: If ``g`` has more than 8 vertices or the batch
            more than 3 requests.
    """
    num_vertices = g.graph.number_of_nodes()
    if num_vertices > MAX_VERTICES or len(batch) > MAX_REQUESTS:
        raise OracleLimitError(
            f"Instance has {num_vertices} vertices and {len(batch)} requests; "
            f"limits are {MAX_VERTICES} and {MAX_REQUESTS}"
        )
    requests = list(batch.requests)
    options = [
        [None] + _candidate_paths(g, r, allow_isl, allow_ground_transit) for r in requests
    ]
    logger.debug(
        f"Brute force over {sum(len(o) for o in options)} path options "
        f"({math.prod(len(o) for o in options)} assignments at most)"
    )
    return _best(g.copy(), options, requests, 0)
