"""Static logical graph for a request window.

Every physical node ``z`` becomes the vertex ``l(z)`` whose id is the
node's canonical integer id, so ``l`` and ``p`` are the canonical-id
bijection. Two vertices are adjacent iff their physical nodes stay within
communication range for the whole window. Vertices carry residual
transmitter/receiver/memory budgets and edges carry residual channel
counts; reserving a path subtracts its role-based cost.

Path cost for demand ``d``, with the path oriented source to destination:
each hop ``u -> v`` uses ``d`` channels on the edge, ``d`` transmitters and
``d`` memories at ``u``, ``d`` receivers and ``d`` memories at ``v``.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.constellation.geometry import (
    ConstellationConfig,
    GeoCoord,
    NodeId,
    node_positions,
    pairwise_distance,
)
from src.constellation.visibility import (
    TimeWindow,
    range_ground_sat,
    range_sat_sat,
    sample_times,
)
from src.exceptions import PathInfeasibleError
from src.utils.rng import hash_ints

logger = logging.getLogger(__name__)

DEFAULT_RESOURCES = 10
MAX_CHANNELS = 5

Edge = Tuple[int, int]


@dataclass(frozen=True)
class ResourceProfile:
    """Transmitters, receivers and quantum memories at a vertex."""

    transmitters: int
    receivers: int
    memories: int

    @classmethod
    def uniform(cls, amount: int) -> "ResourceProfile":
        """Profile with ``amount`` of every resource."""
        return cls(amount, amount, amount)

    def __add__(self, other: "ResourceProfile") -> "ResourceProfile":
        return ResourceProfile(
            self.transmitters + other.transmitters,
            self.receivers + other.receivers,
            self.memories + other.memories,
        )

    def covers(self, other: "ResourceProfile") -> bool:
        """Whether every component is at least the other's."""
        return (
            self.transmitters >= other.transmitters
            and self.receivers >= other.receivers
            and self.memories >= other.memories
        )


ZERO = ResourceProfile(0, 0, 0)


@dataclass(frozen=True)
class EntanglementPath:
    """A source-to-destination vertex sequence carrying ``demand`` ebits."""

    vertices: Tuple[int, ...]
    demand: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    @property
    def source(self) -> int:
        """First vertex."""
        return self.vertices[0]

    @property
    def destination(self) -> int:
        """Last vertex."""
        return self.vertices[-1]

    @property
    def hops(self) -> List[Edge]:
        """Directed hops in source-to-destination order."""
        return list(zip(self.vertices[:-1], self.vertices[1:]))

    @property
    def intermediates(self) -> Tuple[int, ...]:
        """Relay vertices, endpoints excluded."""
        return self.vertices[1:-1]

    def is_simple(self) -> bool:
        """Whether no vertex repeats."""
        return len(set(self.vertices)) == len(self.vertices)

    def vertex_costs(self) -> Dict[int, ResourceProfile]:
        """Role-based resource consumption of each vertex on the path."""
        costs: Dict[int, ResourceProfile] = defaultdict(lambda: ZERO)
        d = self.demand
        for u, v in self.hops:
            costs[u] = costs[u] + ResourceProfile(d, 0, d)
            costs[v] = costs[v] + ResourceProfile(0, d, d)
        return dict(costs)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "demand": self.demand}


def edge_key(u: int, v: int) -> Edge:
    """Order-normalized undirected edge key."""
    return (u, v) if u < v else (v, u)


def channel_count(channel_seed: int, u: int, v: int) -> int:
    """Deterministic channel count in ``1..MAX_CHANNELS`` for a node pair."""
    lo, hi = edge_key(u, v)
    return 1 + hash_ints(channel_seed, lo, hi) % MAX_CHANNELS


class LogicalGraph:
    """Residual logical graph ``G = (V, E)`` for one time window.

    Vertex ids are canonical node ids. Node attributes: ``node``
    (:class:`NodeId`), ``transmitters``, ``receivers``, ``memories``.
    Edge attribute: ``channels``.

    Attributes:
        graph: Underlying undirected ``networkx`` graph.
        window: Time window the edges are valid for.
        num_ground: Number of ground-station vertices (ids ``0..G-1``).
        sats_per_ring: K, used to map ids back to ``(ring, slot)``.
    """

    def __init__(self, window: TimeWindow, num_ground: int, sats_per_ring: int):
        self.graph = nx.Graph()
        self.window = window
        self.num_ground = num_ground
        self.sats_per_ring = sats_per_ring
        self._sorted_adj: Optional[Dict[int, List[int]]] = None

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def add_vertex(self, node: NodeId, resources: ResourceProfile) -> int:
        """Add the vertex of a physical node with the given budgets.

        Args:
            node: Physical node; its canonical id becomes the vertex id.
            resources: Initial transmitter, receiver and memory budgets.

        Returns:
            The vertex id.
        """
        v = node.canonical(self.num_ground, self.sats_per_ring)
        self.graph.add_node(
            v,
            node=node,
            transmitters=resources.transmitters,
            receivers=resources.receivers,
            memories=resources.memories,
        )
        self._sorted_adj = None
        return v

    def add_edge(self, u: int, v: int, channels: int) -> None:
        """Connect two vertices with ``channels`` quantum channels.

        Raises:
            ValueError: On a self-loop, a ground-ground pair or fewer than
                one channel.
        """
        if u == v:
            raise ValueError(f"Self-loop on vertex {u}")
        if self.is_ground(u) and self.is_ground(v):
            raise ValueError(f"Ground-ground edge ({u}, {v}) is not allowed")
        if channels < 1:
            raise ValueError(f"Edge ({u}, {v}) needs at least one channel, got {channels}")
        self.graph.add_edge(u, v, channels=channels)
        self._sorted_adj = None

    @classmethod
    def synthetic(
        cls,
        num_ground: int,
        num_satellites: int,
        edges: Mapping[Edge, int],
        resources: int = DEFAULT_RESOURCES,
        window: Optional[TimeWindow] = None,
    ) -> "LogicalGraph":
        """Build a graph directly from an edge list, for tests and oracles.

        Satellites form a single ring, so vertex ``num_ground + k`` is
        satellite ``(0, k)``.

        Args:
            num_ground: Number of ground vertices.
            num_satellites: Number of satellite vertices.
            edges: Mapping of ``(u, v)`` to channel count.
            resources: Budget given to every resource of every vertex.
            window: Window to record; defaults to ``[0, 0]``.
        """
        g = cls(window or TimeWindow(0.0, 0.0), num_ground, max(num_satellites, 1))
        profile = ResourceProfile.uniform(resources)
        for i in range(num_ground):
            g.add_vertex(NodeId.ground(i), profile)
        for k in range(num_satellites):
            g.add_vertex(NodeId.satellite(0, k), profile)
        for (u, v), channels in edges.items():
            g.add_edge(u, v, channels)
        return g

    def copy(self) -> "LogicalGraph":
        """Independent copy; residual updates on it leave this graph alone."""
        clone = LogicalGraph(self.window, self.num_ground, self.sats_per_ring)
        clone.graph = self.graph.copy()
        clone._sorted_adj = self._sorted_adj
        return clone

    def without_isl(self) -> "LogicalGraph":
        """Copy of this graph with every satellite-satellite edge removed."""
        clone = self.copy()
        clone.graph.remove_edges_from(
            [(u, v) for u, v in self.graph.edges if self.is_satellite(u) and self.is_satellite(v)]
        )
        clone._sorted_adj = None
        return clone

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def vertex(self, node: NodeId) -> int:
        """``l(node)``: the vertex of a physical node."""
        v = node.canonical(self.num_ground, self.sats_per_ring)
        if v not in self.graph:
            raise KeyError(f"No vertex for node {node.label}")
        return v

    def node(self, v: int) -> NodeId:
        """``p(v)``: the physical node of a vertex."""
        return self.graph.nodes[v]["node"]

    def is_ground(self, v: int) -> bool:
        """Whether vertex ``v`` is a ground station."""
        return v < self.num_ground

    def is_satellite(self, v: int) -> bool:
        """Whether vertex ``v`` is a satellite."""
        return v >= self.num_ground

    @property
    def vertices(self) -> List[int]:
        """Vertex ids in ascending order."""
        return sorted(self.graph.nodes)

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield ``(u, v, channels)`` with ``u < v``, sorted."""
        for u, v in sorted(edge_key(a, b) for a, b in self.graph.edges):
            yield u, v, self.graph.edges[u, v]["channels"]

    def edge_set(self) -> Set[Edge]:
        """Edges as order-normalized ``(u, v)`` pairs."""
        return {edge_key(u, v) for u, v in self.graph.edges}

    def has_edge(self, u: int, v: int) -> bool:
        """Whether ``u`` and ``v`` are adjacent."""
        return self.graph.has_edge(u, v)

    def channels(self, u: int, v: int) -> int:
        """Residual channel count of edge ``(u, v)``.

        Raises:
            KeyError: If the edge does not exist.
        """
        return self.graph.edges[u, v]["channels"]

    def resources(self, v: int) -> ResourceProfile:
        """Residual budgets of vertex ``v``."""
        attrs = self.graph.nodes[v]
        return ResourceProfile(attrs["transmitters"], attrs["receivers"], attrs["memories"])

    def neighbors(self, v: int) -> List[int]:
        """Neighbors of ``v`` in ascending id order.

        The sorted adjacency is cached until the next vertex or edge is added.

        Args:
            v: Vertex id.

        Returns:
            Adjacent vertex ids, ascending.
        """
        if self._sorted_adj is None:
            self._sorted_adj = {u: sorted(self.graph.adj[u]) for u in self.graph.nodes}
        return self._sorted_adj[v]

    def is_isl(self, u: int, v: int) -> bool:
        """Whether ``(u, v)`` joins two satellites."""
        return self.is_satellite(u) and self.is_satellite(v)

    # ------------------------------------------------------------------
    # Residual updates
    # ------------------------------------------------------------------

    def path_violations(self, path: EntanglementPath) -> List[str]:
        """Reasons the path cannot be reserved now; empty if it can."""
        problems = []
        if path.demand < 1:
            problems.append(f"demand must be >= 1, got {path.demand}")
        if len(path.vertices) < 2:
            problems.append("path needs at least two vertices")
            return problems
        if not path.is_simple():
            problems.append("path repeats a vertex")
        missing = [v for v in path.vertices if v not in self.graph]
        if missing:
            problems.append(f"unknown vertices {missing}")
            return problems

        for u, v in path.hops:
            if not self.graph.has_edge(u, v):
                problems.append(f"no edge ({u}, {v})")
            elif self.channels(u, v) < path.demand:
                problems.append(
                    f"edge ({u}, {v}) has {self.channels(u, v)} channels, needs {path.demand}"
                )

        for v, cost in path.vertex_costs().items():
            have = self.resources(v)
            if not have.covers(cost):
                problems.append(f"vertex {v} has {have}, needs {cost}")
        return problems

    def check_path_feasible(self, path: EntanglementPath) -> bool:
        """Whether the residual graph can carry ``path``."""
        return not self.path_violations(path)

    def reserve_path(self, path: EntanglementPath) -> "LogicalGraph":
        """Subtract the path's channels and role-based vertex costs.

        Returns:
            This graph, updated in place.

        Raises:
            PathInfeasibleError: If the path is not feasible; the graph is
                left unchanged.
        """
        problems = self.path_violations(path)
        if problems:
            raise PathInfeasibleError(f"Cannot reserve path {path.vertices}: {'; '.join(problems)}")
        self._apply(path, -1)
        return self

    def release_path(self, path: EntanglementPath) -> "LogicalGraph":
        """Exact inverse of :meth:`reserve_path` for a previously reserved path."""
        self._apply(path, +1)
        return self

    def _apply(self, path: EntanglementPath, sign: int) -> None:
        d = path.demand
        for u, v in path.hops:
            self.graph.edges[u, v]["channels"] += sign * d
        for v, cost in path.vertex_costs().items():
            attrs = self.graph.nodes[v]
            attrs["transmitters"] += sign * cost.transmitters
            attrs["receivers"] += sign * cost.receivers
            attrs["memories"] += sign * cost.memories

    # ------------------------------------------------------------------
    # Reporting
    # ------------------------------------------------------------------

    def summary(self) -> Dict[str, int]:
        """Counts reported for a window: vertices, connected stations, ISLs."""
        isl = sum(1 for u, v in self.graph.edges if self.is_isl(u, v))
        total = self.graph.number_of_edges()
        connected_ground = sum(
            1 for v in range(self.num_ground) if v in self.graph and self.graph.degree(v) > 0
        )
        return {
            "vertices": self.graph.number_of_nodes(),
            "ground_vertices": self.num_ground,
            "satellite_vertices": self.graph.number_of_nodes() - self.num_ground,
            "edges": total,
            "isl_edges": isl,
            "ground_sat_edges": total - isl,
            "connected_ground_stations": connected_ground,
        }

    def to_dict(self, station_names: Optional[Sequence[str]] = None) -> dict:
        """JSON-ready description of vertices and edges."""
        vertices = []
        for v in self.vertices:
            entry = {
                "id": v,
                "node": self.node(v).to_dict(),
                "transmitters": self.graph.nodes[v]["transmitters"],
                "receivers": self.graph.nodes[v]["receivers"],
                "memories": self.graph.nodes[v]["memories"],
            }
            if station_names is not None and self.is_ground(v):
                entry["name"] = station_names[v]
            vertices.append(entry)
        return {
            "window": {"tau": self.window.tau, "delta": self.window.delta},
            "vertices": vertices,
            "edges": [{"u": u, "v": v, "channels": c} for u, v, c in self.edges()],
        }


def window_max_distances(
    cfg: ConstellationConfig,
    coords: Sequence[GeoCoord],
    window: TimeWindow,
) -> Tuple[np.ndarray, np.ndarray]:
    """Sampled window maxima of sat-sat and ground-sat distances.

    Returns:
        ``(sat_sat, ground_sat)`` arrays of shape (S, S) and (G, S), with
        satellites in canonical order.
    """
    num_ground = len(coords)
    num_sats = cfg.num_satellites
    sat_sat = np.zeros((num_sats, num_sats))
    ground_sat = np.zeros((num_ground, num_sats))
    for t in sample_times(cfg, window):
        positions = node_positions(cfg, coords, t)[0]
        ground = positions[:num_ground]
        sats = positions[num_ground:]
        np.maximum(
            sat_sat,
            pairwise_distance(sats[:, np.newaxis, :], sats[np.newaxis, :, :]),
            out=sat_sat,
        )
        np.maximum(
            ground_sat,
            pairwise_distance(ground[:, np.newaxis, :], sats[np.newaxis, :, :]),
            out=ground_sat,
        )
    return sat_sat, ground_sat


def build_logical_graph(
    cfg: ConstellationConfig,
    stations: Sequence[GeoCoord],
    window: TimeWindow,
    channel_seed: int,
    resource_default: int = DEFAULT_RESOURCES,
) -> LogicalGraph:
    """Build the logical graph of the physical network for ``window``.

    Args:
        cfg: Constellation configuration.
        stations: Ground-station coordinates, in ground-index order.
        window: Time window the links must survive.
        channel_seed: Seed of the per-pair channel hash.
        resource_default: Transmitters, receivers and memories per vertex.

    Returns:
        The logical graph with full (unreserved) budgets.
    """
    if not stations:
        raise ValueError("At least one ground station is required")

    num_ground = len(stations)
    k = cfg.sats_per_ring
    graph = LogicalGraph(window, num_ground, k)
    profile = ResourceProfile.uniform(resource_default)
    for g in range(num_ground):
        graph.add_vertex(NodeId.ground(g), profile)
    for r in range(cfg.rings):
        for slot in range(k):
            graph.add_vertex(NodeId.satellite(r, slot), profile)

    sat_sat, ground_sat = window_max_distances(cfg, stations, window)
    rows, cols = np.nonzero(np.triu(sat_sat <= range_sat_sat(cfg), k=1))
    edges = [(num_ground + int(a), num_ground + int(b)) for a, b in zip(rows, cols)]
    isl_count = len(edges)
    g_rows, s_cols = np.nonzero(ground_sat <= range_ground_sat(cfg))
    edges.extend((int(a), num_ground + int(b)) for a, b in zip(g_rows, s_cols))

    for u, v in edges:
        graph.add_edge(u, v, channel_count(channel_seed, u, v))

    logger.debug(
        f"Logical graph R={cfg.rings} K={k} tau={window.tau} delta={window.delta}: "
        f"{graph.graph.number_of_nodes()} vertices, {len(edges)} edges ({isl_count} ISL)"
    )
    return graph


def consumed_resources(paths: Iterable[EntanglementPath]) -> Dict[int, ResourceProfile]:
    """Total role-based vertex consumption of a set of paths."""
    totals: Dict[int, ResourceProfile] = defaultdict(lambda: ZERO)
    for path in paths:
        for v, cost in path.vertex_costs().items():
            totals[v] = totals[v] + cost
    return dict(totals)
