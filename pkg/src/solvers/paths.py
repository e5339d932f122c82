"""Flow assignments and path extraction.

A flow assignment holds, per request, the admission bit ``x_i`` and the
set of directed arcs ``(u, v)`` with ``f_i(u, v) = 1``. Served paths are
traced from the source along unit arcs; flow cycles that are not on the
traced path are dropped.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from src.exceptions import FlowConsistencyError
from src.network.logical_graph import EntanglementPath, LogicalGraph
from src.network.requests import RequestBatch

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


@dataclass
class FlowAssignment:
    """Binary flows per request.

    Antiparallel unit arcs of one request cancel on construction, so at
    most one of ``(u, v)`` and ``(v, u)`` is present per request.

    Attributes:
        admitted: ``x_i`` per request index.
        arcs: Directed unit arcs per request index.
    """

    admitted: Dict[int, int]
    arcs: Dict[int, Set[Arc]] = field(default_factory=dict)

    def __post_init__(self):
        for i, arcs in self.arcs.items():
            arcs = set(arcs)
            self.arcs[i] = {(u, v) for u, v in arcs if (v, u) not in arcs}


def _net_outflow(arcs: Set[Arc]) -> Dict[int, int]:
    net: Dict[int, int] = defaultdict(int)
    for u, v in arcs:
        net[u] += 1
        net[v] -= 1
    return net


def trace_path(arcs: Set[Arc], s: int, t: int) -> List[int]:
    """Walk unit arcs from ``s`` to ``t``, cutting out any loop revisited.

    Raises:
        FlowConsistencyError: If the walk gets stuck before reaching ``t``.
    """
    successors: Dict[int, List[int]] = defaultdict(list)
    for u, v in sorted(arcs):
        successors[u].append(v)

    path = [s]
    position = {s: 0}
    current = s
    while current != t:
        if not successors[current]:
            raise FlowConsistencyError(f"Flow from {s} dead-ends at {current} before {t}")
        nxt = successors[current].pop(0)
        if nxt in position:
            # Loop closed: drop the cycle from the walk.
            cut = position[nxt]
            for v in path[cut + 1:]:
                del position[v]
            path = path[: cut + 1]
        else:
            position[nxt] = len(path)
            path.append(nxt)
        current = nxt
    return path


def extract_paths(
    flows: FlowAssignment,
    g: LogicalGraph,
    batch: RequestBatch,
) -> Dict[int, EntanglementPath]:
    """Paths of the admitted requests of a flow assignment.

    Args:
        flows: Flow assignment satisfying the conservation constraints.
        g: Logical graph the flows live on.
        batch: Requests, for endpoints and demands.

    Returns:
        Mapping of request index to path, for requests with ``x_i = 1``.

    Raises:
        FlowConsistencyError: If conservation is violated or an arc is not
            an edge of ``g``.
    """
    paths: Dict[int, EntanglementPath] = {}
    for request in batch.requests:
        i = request.index
        arcs = flows.arcs.get(i, set())
        x = flows.admitted.get(i, 0)
        for u, v in arcs:
            if not g.has_edge(u, v):
                raise FlowConsistencyError(f"Request {i}: arc ({u}, {v}) is not an edge")

        net = _net_outflow(arcs)
        for v, value in net.items():
            expected = 0
            if v == request.src:
                expected = x
            elif v == request.dst:
                expected = -x
            if value != expected:
                raise FlowConsistencyError(
                    f"Request {i}: net outflow {value} at vertex {v}, expected {expected}"
                )
        if x and net.get(request.src, 0) != 1:
            raise FlowConsistencyError(f"Request {i}: admitted without flow")
        if not x:
            continue
        paths[i] = EntanglementPath(trace_path(arcs, request.src, request.dst), request.demand)

    dropped = sum(len(flows.arcs.get(i, ())) for i in flows.arcs) - sum(
        len(p.hops) for p in paths.values()
    )
    if dropped:
        logger.debug(f"Discarded {dropped} cyclic flow arcs during path extraction")
    return paths
