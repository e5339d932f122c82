"""Integer multi-commodity flow model of the OED problem.

Variables are ``x_i`` (request ``i`` admitted) followed by one binary
``f_i(u, v)`` per admissible directed arc of each request. Constraints:

* conservation: net outflow of request ``i`` is ``x_i`` at its source,
  ``-x_i`` at its destination and 0 elsewhere;
* channel capacity per edge: ``sum_i d_i (f_i(u, v) + f_i(v, u)) <= channels``;
* per vertex: ``sum_i d_i * outflow <= transmitters``,
  ``sum_i d_i * inflow <= receivers``,
  ``sum_i d_i * (inflow + outflow) <= memories``.

Arcs a simple path of request ``i`` could never use are left out of the
model: arcs on edges with fewer than ``d_i`` channels, arcs into the
source or out of the destination, arcs touching a vertex whose budget
cannot cover its role, arcs through non-endpoint ground stations (unless
ground transit is allowed), satellite-satellite arcs when ISLs are
disabled, and arcs not on any source-to-destination route.

The arc table and its admissibility test are shared with the path
formulation in :mod:`src.solvers.path_model`.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order

from src.network.logical_graph import LogicalGraph
from src.network.requests import Request
from src.solvers.paths import FlowAssignment

logger = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-6


@dataclass
class ArcTable:
    """Both orientations of every edge of a logical graph, with budgets.

    Arc ``a`` and arc ``a + num_edges`` are the two orientations of edge
    ``a``. Vertex arrays are indexed by vertex id.

    Attributes:
        num_vertices: One more than the largest vertex id.
        num_ground: Ground vertices are ids ``0..num_ground-1``.
        edge_index: ``(u, v)`` with ``u < v`` to edge position.
        channels: Channel count per edge.
        tails: Tail vertex per arc.
        heads: Head vertex per arc.
        arc_edge: Edge position per arc.
        transmitters: Transmitter budget per vertex.
        receivers: Receiver budget per vertex.
        memories: Memory budget per vertex.
    """

    num_vertices: int
    num_ground: int
    edge_index: Dict[Tuple[int, int], int]
    channels: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    arc_edge: np.ndarray
    transmitters: np.ndarray
    receivers: np.ndarray
    memories: np.ndarray

    @classmethod
    def from_graph(cls, g: LogicalGraph) -> "ArcTable":
        """Snapshot the edges and current budgets of ``g``."""
        num_v = max(g.vertices) + 1 if g.vertices else 0
        edge_list = list(g.edges())
        eu = np.array([e[0] for e in edge_list], dtype=int)
        ev = np.array([e[1] for e in edge_list], dtype=int)
        num_e = len(edge_list)

        tx = np.zeros(num_v, dtype=int)
        rx = np.zeros(num_v, dtype=int)
        mem = np.zeros(num_v, dtype=int)
        for v in g.vertices:
            profile = g.resources(v)
            tx[v], rx[v], mem[v] = profile.transmitters, profile.receivers, profile.memories

        return cls(
            num_vertices=num_v,
            num_ground=g.num_ground,
            edge_index={(u, v): e for e, (u, v, _) in enumerate(edge_list)},
            channels=np.array([e[2] for e in edge_list], dtype=int),
            tails=np.concatenate([eu, ev]),
            heads=np.concatenate([ev, eu]),
            arc_edge=np.concatenate([np.arange(num_e), np.arange(num_e)]),
            transmitters=tx,
            receivers=rx,
            memories=mem,
        )

    @property
    def num_edges(self) -> int:
        return self.channels.size

    @property
    def num_arcs(self) -> int:
        return self.tails.size

    @property
    def is_ground(self) -> np.ndarray:
        return np.arange(self.num_vertices) < self.num_ground

    def admissible(
        self,
        request: Request,
        allow_isl: bool = True,
        allow_ground_transit: bool = False,
    ) -> np.ndarray:
        """Boolean mask of the arcs some simple path of ``request`` may use.

        Reachability is not checked; see :func:`reachable_arcs`.
        """
        d, s, t = request.demand, request.src, request.dst
        tails, heads = self.tails, self.heads
        is_ground = self.is_ground
        tx, rx, mem = self.transmitters, self.receivers, self.memories

        ok = self.channels[self.arc_edge] >= d
        if not allow_isl:
            ok &= is_ground[tails] | is_ground[heads]
        if not allow_ground_transit:
            ok &= ~is_ground[tails] | (tails == s)
            ok &= ~is_ground[heads] | (heads == t)
        ok &= (heads != s) & (tails != t)

        vertex_ok = (tx >= d) & (rx >= d) & (mem >= 2 * d)
        vertex_ok[s] = tx[s] >= d and mem[s] >= d
        vertex_ok[t] = rx[t] >= d and mem[t] >= d
        ok &= vertex_ok[tails] & vertex_ok[heads]
        return ok

    def resource_rows(self, vertices: Sequence[int], demand: int) -> np.ndarray:
        """Constraint rows charged ``demand`` once per entry by a path.

        Rows are laid out as edges, then transmitters, receivers and
        memories per vertex; an intermediate vertex appears twice in the
        memory block.
        """
        num_e, num_v = self.num_edges, self.num_vertices
        hops = list(zip(vertices[:-1], vertices[1:]))
        edges = [self.edge_index[(u, v) if u < v else (v, u)] for u, v in hops]
        tails = [u for u, _ in hops]
        heads = [v for _, v in hops]
        return np.array(
            edges
            + [num_e + u for u in tails]
            + [num_e + num_v + v for v in heads]
            + [num_e + 2 * num_v + u for u in tails]
            + [num_e + 2 * num_v + v for v in heads],
            dtype=int,
        )

    def row_capacities(self) -> np.ndarray:
        """Right-hand sides matching :meth:`resource_rows`."""
        return np.concatenate(
            [self.channels, self.transmitters, self.receivers, self.memories]
        ).astype(float)


def _reachable(adj: sp.csr_matrix, start: int) -> np.ndarray:
    mask = np.zeros(adj.shape[0], dtype=bool)
    mask[breadth_first_order(adj, start, directed=True, return_predecessors=False)] = True
    return mask


def reachable_arcs(table: ArcTable, candidates: np.ndarray, s: int, t: int) -> np.ndarray:
    """Arcs among ``candidates`` lying on some ``s``-``t`` route; empty if none."""
    if candidates.size == 0:
        return candidates
    num_v = table.num_vertices
    tails, heads = table.tails[candidates], table.heads[candidates]
    adj = sp.csr_matrix(
        (np.ones(candidates.size), (tails, heads)),
        shape=(num_v, num_v),
    )
    from_source = _reachable(adj, s)
    if not from_source[t]:
        return candidates[:0]
    to_sink = _reachable(adj.T.tocsr(), t)
    return candidates[from_source[tails] & to_sink[heads]]


@dataclass
class FlowModel:
    """Matrices of the flow model, in ``scipy`` minimization form.

    Attributes:
        requests: Requests, one commodity each, in variable order.
        arc_request: Commodity position of each arc variable.
        arc_tail: Tail vertex of each arc variable.
        arc_head: Head vertex of each arc variable.
        c: Objective (negated rewards on ``x``; zeros on arcs).
        a_eq: Conservation matrix (CSR).
        b_eq: Conservation right-hand side.
        a_ub: Capacity and resource matrix (CSR).
        b_ub: Capacity and resource right-hand side.
        upper: Variable upper bounds (0 fixes an unroutable request out).
    """

    requests: List[Request]
    arc_request: np.ndarray
    arc_tail: np.ndarray
    arc_head: np.ndarray
    c: np.ndarray
    a_eq: sp.csr_matrix
    b_eq: np.ndarray
    a_ub: sp.csr_matrix
    b_ub: np.ndarray
    upper: np.ndarray

    @property
    def num_requests(self) -> int:
        return len(self.requests)

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def rewards(self) -> np.ndarray:
        return -self.c[: self.num_requests]

    def routable_reward(self) -> int:
        """Total reward of requests that have any admissible route."""
        routable = self.upper[: self.num_requests] > 0
        return int(round(self.rewards[routable].sum()))

    def assignment(self, values: np.ndarray) -> FlowAssignment:
        """Round a (near-)integral solution vector into a flow assignment."""
        n = self.num_requests
        rounded = np.rint(values).astype(int)
        admitted = {r.index: int(rounded[i]) for i, r in enumerate(self.requests)}
        arcs = {r.index: set() for r in self.requests}
        for a in np.nonzero(rounded[n:] == 1)[0]:
            request = self.requests[self.arc_request[a]]
            arcs[request.index].add((int(self.arc_tail[a]), int(self.arc_head[a])))
        return FlowAssignment(admitted, arcs)


def _resource_rows(
    vertices: np.ndarray,
    coeffs: np.ndarray,
    var_index: np.ndarray,
    budget: np.ndarray,
    num_vars: int,
):
    """Rows ``sum coeff * var <= budget[v]`` grouped by vertex, binding ones only.

    Every block spans all ``num_vars`` columns so the blocks stack.
    """
    if vertices.size == 0:
        return None
    load = np.bincount(vertices, weights=coeffs, minlength=budget.size)
    binding = np.nonzero(load > budget)[0]
    if binding.size == 0:
        return None
    row_of = np.full(budget.size, -1)
    row_of[binding] = np.arange(binding.size)
    keep = row_of[vertices] >= 0
    matrix = sp.coo_matrix(
        (coeffs[keep], (row_of[vertices[keep]], var_index[keep])),
        shape=(binding.size, num_vars),
    )
    return matrix, budget[binding].astype(float)


def build_flow_model(
    g: LogicalGraph,
    requests: Sequence[Request],
    allow_isl: bool = True,
    allow_ground_transit: bool = False,
) -> FlowModel:
    """Build the pruned multi-commodity flow model for ``requests`` on ``g``."""
    requests = list(requests)
    n_req = len(requests)
    table = ArcTable.from_graph(g)
    num_v = table.num_vertices

    sel_request, sel_arc = [], []
    upper_x = np.zeros(n_req)
    for i, req in enumerate(requests):
        candidates = np.nonzero(table.admissible(req, allow_isl, allow_ground_transit))[0]
        keep = reachable_arcs(table, candidates, req.src, req.dst)
        if keep.size == 0:
            continue
        upper_x[i] = 1.0
        sel_request.append(np.full(keep.size, i))
        sel_arc.append(keep)

    arc_ids = np.concatenate(sel_arc) if sel_arc else np.zeros(0, dtype=int)
    arc_request = np.concatenate(sel_request) if sel_request else np.zeros(0, dtype=int)
    arc_tail = table.tails[arc_ids]
    arc_head = table.heads[arc_ids]
    arc_edges = table.arc_edge[arc_ids]
    num_arcs = arc_ids.size
    num_vars = n_req + num_arcs
    var_of_arc = n_req + np.arange(num_arcs)
    demand = np.array([r.demand for r in requests], dtype=float)
    arc_demand = demand[arc_request] if num_arcs else np.zeros(0)

    c = np.concatenate([-np.array([r.reward for r in requests], dtype=float), np.zeros(num_arcs)])
    upper = np.concatenate([upper_x, np.ones(num_arcs)])

    # Conservation: one row per (request, vertex) touched by that request's arcs.
    src = np.array([r.src for r in requests], dtype=int)
    dst = np.array([r.dst for r in requests], dtype=int)
    routable = np.nonzero(upper_x > 0)[0]
    key_tail = arc_request * num_v + arc_tail
    key_head = arc_request * num_v + arc_head
    key_src = routable * num_v + src[routable]
    key_dst = routable * num_v + dst[routable]
    keys, inverse = np.unique(
        np.concatenate([key_tail, key_head, key_src, key_dst]), return_inverse=True
    )
    n_a, n_r = num_arcs, routable.size
    rows_eq = inverse.ravel()
    cols_eq = np.concatenate([var_of_arc, var_of_arc, routable, routable])
    vals_eq = np.concatenate([np.ones(n_a), -np.ones(n_a), -np.ones(n_r), np.ones(n_r)])
    a_eq = sp.coo_matrix((vals_eq, (rows_eq, cols_eq)), shape=(keys.size, num_vars)).tocsr()
    b_eq = np.zeros(keys.size)

    blocks, rhs = [], []
    for built in (
        _resource_rows(arc_edges, arc_demand, var_of_arc, table.channels.astype(float), num_vars),
        _resource_rows(arc_tail, arc_demand, var_of_arc, table.transmitters.astype(float), num_vars),
        _resource_rows(arc_head, arc_demand, var_of_arc, table.receivers.astype(float), num_vars),
        _resource_rows(
            np.concatenate([arc_tail, arc_head]),
            np.concatenate([arc_demand, arc_demand]),
            np.concatenate([var_of_arc, var_of_arc]),
            table.memories.astype(float),
            num_vars,
        ),
    ):
        if built is not None:
            matrix, bound = built
            blocks.append(matrix)
            rhs.append(bound)
    if blocks:
        a_ub = sp.vstack(blocks).tocsr()
        b_ub = np.concatenate(rhs)
    else:
        a_ub = sp.csr_matrix((0, num_vars))
        b_ub = np.zeros(0)

    logger.debug(
        f"Flow model: {n_req} requests ({n_r} routable), {num_arcs} arcs, "
        f"{a_eq.shape[0]} equalities, {a_ub.shape[0]} inequalities"
    )
    return FlowModel(
        requests=requests,
        arc_request=arc_request,
        arc_tail=arc_tail,
        arc_head=arc_head,
        c=c,
        a_eq=a_eq,
        b_eq=b_eq,
        a_ub=a_ub,
        b_ub=b_ub,
        upper=upper,
    )
