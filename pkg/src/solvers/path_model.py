"""Path formulation of the OED problem, solved by column generation.

A column is one feasible path of one request. The restricted master LP
mixes the known columns subject to the channel, transmitter, receiver and
memory budgets and to at most one unit per request:

    max  sum_p w_p lambda_p
    s.t. sum_p d_p a_p lambda_p <= capacities
         sum_{p of request i} lambda_p <= 1

Paths are generated lazily. The dual prices of the budget rows turn into
arc weights (edge price plus the tail's transmitter and memory prices plus
the head's receiver and memory prices), and Dijkstra on the arcs a request
may use returns the path with the best reduced profit. Every pricing round
yields a Lagrangian upper bound (LP value plus the positive reduced
profits), so a node can be pruned before the LP has converged.

Requests fixed in by branching get a ``sum lambda_p >= 1`` row with a
penalized slack, which keeps the master feasible while the columns that
can serve them are still being generated.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse.csgraph import dijkstra

from src.network.logical_graph import EntanglementPath, LogicalGraph
from src.network.requests import Request
from src.solvers.flow_model import INTEGRALITY_TOL, ArcTable

logger = logging.getLogger(__name__)

# Keeps Dijkstra weights positive and breaks price ties towards fewer hops.
HOP_EPSILON = 1e-9
PRICE_TOL = 1e-7
BOUND_TOL = 1e-6
MAX_PRICING_ROUNDS = 200


@dataclass(eq=False)
class Column:
    """A path of one request and the constraint rows it is charged on."""

    request: int
    path: EntanglementPath
    rows: np.ndarray


@dataclass
class Relaxation:
    """Outcome of column generation at one branch-and-bound node.

    Attributes:
        bound: Upper bound on the best reward in the node.
        value: Final restricted master LP value.
        admitted: ``x_i`` per request position.
        selection: Paths keyed by request index when the LP picked whole
            columns only, else None.
        converged: True if the last pricing round found no improving path.
        rounds: Pricing rounds performed.
    """

    bound: float
    value: float
    admitted: np.ndarray
    selection: Optional[Dict[int, EntanglementPath]] = None
    converged: bool = False
    rounds: int = 0


@dataclass
class _Master:
    value: float
    weights: np.ndarray
    slack: np.ndarray
    row_prices: np.ndarray
    request_prices: np.ndarray
    columns: List[int] = field(default_factory=list)


def floor_bound(bound: float) -> int:
    """Largest integer reward a real-valued bound admits."""
    return math.floor(bound + BOUND_TOL)


class PathModel:
    """Column pool, restricted master and pricing for one OED instance.

    Attributes:
        requests: Requests in position order.
        table: Arc table of the graph the paths live on.
        routable: Whether each request has any admissible path.
        columns: Column pool shared by every node of the search.
    """

    def __init__(
        self,
        g: LogicalGraph,
        requests: Sequence[Request],
        allow_isl: bool = True,
        allow_ground_transit: bool = False,
    ):
        self.requests = list(requests)
        self.table = ArcTable.from_graph(g)
        self.rewards = np.array([r.reward for r in self.requests], dtype=float)
        self.demands = np.array([r.demand for r in self.requests], dtype=float)
        self.capacity = self.table.row_capacities()
        self.columns: List[Column] = []
        self._known: Set[Tuple[int, Tuple[int, ...]]] = set()
        self._arcs = [
            np.nonzero(self.table.admissible(r, allow_isl, allow_ground_transit))[0]
            for r in self.requests
        ]
        # Zero prices: the seed column of every request is a minimum-hop path.
        seed_weights = np.full(self.table.num_arcs, HOP_EPSILON)
        self.routable = np.zeros(len(self.requests), dtype=bool)
        for p in range(len(self.requests)):
            path = self._shortest_path(p, seed_weights)
            if path is not None:
                self.routable[p] = True
                self.add_column(p, path)

    @property
    def num_requests(self) -> int:
        return len(self.requests)

    def routable_reward(self) -> int:
        """Total reward of requests that have any admissible route."""
        return int(round(self.rewards[self.routable].sum()))

    def add_column(self, p: int, path: EntanglementPath) -> bool:
        """Add ``path`` for the request at position ``p``; False if already known."""
        key = (p, path.vertices)
        if key in self._known:
            return False
        self._known.add(key)
        rows = self.table.resource_rows(path.vertices, path.demand)
        self.columns.append(Column(p, path, rows))
        return True

    # ------------------------------------------------------------------
    # Pricing
    # ------------------------------------------------------------------

    def _arc_weights(self, row_prices: np.ndarray) -> np.ndarray:
        t = self.table
        num_e, num_v = t.num_edges, t.num_vertices
        edge = row_prices[:num_e]
        tx = row_prices[num_e:num_e + num_v]
        rx = row_prices[num_e + num_v:num_e + 2 * num_v]
        mem = row_prices[num_e + 2 * num_v:]
        return (
            edge[t.arc_edge] + tx[t.tails] + rx[t.heads] + mem[t.tails] + mem[t.heads]
            + HOP_EPSILON
        )

    def _shortest_path(self, p: int, weights: np.ndarray) -> Optional[EntanglementPath]:
        arcs = self._arcs[p]
        if arcs.size == 0:
            return None
        request = self.requests[p]
        num_v = self.table.num_vertices
        graph = sp.csr_matrix(
            (weights[arcs], (self.table.tails[arcs], self.table.heads[arcs])),
            shape=(num_v, num_v),
        )
        dist, pred = dijkstra(graph, directed=True, indices=request.src, return_predecessors=True)
        if not np.isfinite(dist[request.dst]):
            return None
        vertices = [request.dst]
        while vertices[-1] != request.src:
            vertices.append(int(pred[vertices[-1]]))
        return EntanglementPath(tuple(reversed(vertices)), request.demand)

    def _price(self, master: _Master, fixed_out: FrozenSet[int]) -> Tuple[float, int]:
        """Add improving columns; returns ``(sum of positive profits, columns added)``."""
        weights = self._arc_weights(master.row_prices)
        # Shortest paths under HOP_EPSILON may cost up to this much more than the true optimum.
        slack_per_unit = HOP_EPSILON * self.table.num_vertices
        gain, added = 0.0, 0
        for p in range(self.num_requests):
            if p in fixed_out or not self.routable[p]:
                continue
            path = self._shortest_path(p, weights)
            if path is None:
                continue
            rows = self.table.resource_rows(path.vertices, path.demand)
            cost = self.demands[p] * master.row_prices[rows].sum()
            profit = self.rewards[p] - cost - master.request_prices[p]
            gain += max(0.0, profit + self.demands[p] * slack_per_unit)
            if profit > PRICE_TOL and self.add_column(p, path):
                added += 1
        return gain, added

    # ------------------------------------------------------------------
    # Restricted master
    # ------------------------------------------------------------------

    def _active(self, fixed_out: FrozenSet[int]) -> List[int]:
        return [j for j, c in enumerate(self.columns) if c.request not in fixed_out]

    def _master_matrix(self, active: List[int], fixed_in: Sequence[int]):
        """Budget, convexity and fixed-in rows over the active columns plus slacks."""
        n_cols = len(active)
        num_vars = n_cols + len(fixed_in)
        cols = [self.columns[j] for j in active]

        rows = np.concatenate([c.rows for c in cols]) if cols else np.zeros(0, dtype=int)
        owner = np.concatenate([np.full(c.rows.size, k) for k, c in enumerate(cols)]) if cols else rows
        vals = np.concatenate([np.full(c.rows.size, float(c.path.demand)) for c in cols]) if cols else np.zeros(0)
        used, local = np.unique(rows, return_inverse=True)
        budget = sp.coo_matrix((vals, (local.ravel(), owner)), shape=(used.size, num_vars))

        col_request = np.array([c.request for c in cols], dtype=int)
        requests, req_local = np.unique(col_request, return_inverse=True)
        convexity = sp.coo_matrix(
            (np.ones(n_cols), (req_local.ravel(), np.arange(n_cols))),
            shape=(requests.size, num_vars),
        )

        fix_rows, fix_cols = [], []
        for k, p in enumerate(fixed_in):
            for j in np.nonzero(col_request == p)[0]:
                fix_rows.append(k)
                fix_cols.append(int(j))
            fix_rows.append(k)
            fix_cols.append(n_cols + k)
        fixed = sp.coo_matrix(
            (-np.ones(len(fix_rows)), (fix_rows, fix_cols)),
            shape=(len(fixed_in), num_vars),
        )

        a_ub = sp.vstack([budget, convexity, fixed]).tocsr()
        b_ub = np.concatenate([self.capacity[used], np.ones(requests.size), -np.ones(len(fixed_in))])
        return a_ub, b_ub, used, requests, col_request

    def _solve_master(
        self,
        fixed_in: Sequence[int],
        fixed_out: FrozenSet[int],
        time_left: Optional[float],
    ) -> Optional[_Master]:
        active = self._active(fixed_out)
        row_prices = np.zeros(self.capacity.size)
        request_prices = np.zeros(self.num_requests)
        if not active and not fixed_in:
            return _Master(0.0, np.zeros(0), np.zeros(0), row_prices, request_prices)

        a_ub, b_ub, used, requests, col_request = self._master_matrix(active, fixed_in)
        penalty = float(self.rewards.sum()) + 1.0
        c = np.concatenate([-self.rewards[col_request], np.full(len(fixed_in), penalty)])
        options = {} if time_left is None else {"time_limit": max(time_left, 1e-3)}
        result = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs", options=options)
        if result.status != 0:
            logger.warning(f"Restricted master LP failed: {result.message}")
            return None

        prices = -np.asarray(result.ineqlin.marginals)
        n_used, n_req = used.size, requests.size
        row_prices[used] = prices[:n_used]
        request_prices[requests] = prices[n_used:n_used + n_req]
        # A fixed-in row enters a column of its request with coefficient -1.
        request_prices[list(fixed_in)] -= prices[n_used + n_req:]
        n_cols = len(active)
        return _Master(
            value=-float(result.fun),
            weights=result.x[:n_cols],
            slack=result.x[n_cols:],
            row_prices=row_prices,
            request_prices=request_prices,
            columns=active,
        )

    def _selection(self, master: _Master) -> Optional[Dict[int, EntanglementPath]]:
        if np.any(master.slack > INTEGRALITY_TOL):
            return None
        weights = master.weights
        if np.any(np.abs(weights - np.rint(weights)) > INTEGRALITY_TOL):
            return None
        chosen = {}
        for j, w in zip(master.columns, weights):
            if w > 0.5:
                column = self.columns[j]
                chosen[self.requests[column.request].index] = column.path
        return chosen

    def _admitted(self, master: _Master) -> np.ndarray:
        x = np.zeros(self.num_requests)
        for j, w in zip(master.columns, master.weights):
            x[self.columns[j].request] += w
        return x

    def relax(
        self,
        fixed_in: FrozenSet[int],
        fixed_out: FrozenSet[int],
        cutoff: int,
        deadline: Optional[float] = None,
    ) -> Optional[Relaxation]:
        """Column generation for the node with the given fixings.

        Args:
            fixed_in: Request positions that must be served.
            fixed_out: Request positions that must not be served.
            cutoff: Reward already achieved; generation stops as soon as
                the bound shows the node cannot beat it.
            deadline: ``time.perf_counter()`` value to stop at.

        Returns:
            The relaxation, or None if the deadline passed or the master LP
            failed.
        """
        ordered_in = sorted(fixed_in)
        bound = math.inf
        master = None
        converged = False
        rounds = 0
        while rounds < MAX_PRICING_ROUNDS:
            time_left = None if deadline is None else deadline - time.perf_counter()
            if time_left is not None and time_left <= 0:
                return None
            master = self._solve_master(ordered_in, fixed_out, time_left)
            if master is None:
                return None
            rounds += 1
            gain, added = self._price(master, fixed_out)
            bound = min(bound, master.value + gain)
            if floor_bound(bound) <= cutoff:
                break
            if added == 0:
                converged = True
                break

        if master is None:
            return None
        if rounds == MAX_PRICING_ROUNDS:
            logger.debug(f"Column generation stopped after {rounds} rounds, bound {bound:.4f}")
        return Relaxation(
            bound=bound,
            value=master.value,
            admitted=self._admitted(master),
            selection=self._selection(master),
            converged=converged,
            rounds=rounds,
        )

    def best_combination(
        self,
        fixed_in: FrozenSet[int] = frozenset(),
        fixed_out: FrozenSet[int] = frozenset(),
        time_left: Optional[float] = None,
    ) -> Dict[int, EntanglementPath]:
        """Best feasible choice among the pooled columns (an integer master).

        Returns:
            Paths keyed by request index; empty if nothing feasible was found.
        """
        active = self._active(fixed_out)
        if not active:
            return {}
        a_ub, b_ub, _, _, col_request = self._master_matrix(active, [])
        n_cols = len(active)
        lower = np.zeros(n_cols)
        constraints = [LinearConstraint(a_ub, -np.inf, b_ub)]
        if fixed_in:
            forced = sp.csr_matrix(
                np.array([(col_request == p).astype(float) for p in sorted(fixed_in)])
            )
            constraints.append(LinearConstraint(forced, 1.0, np.inf))
        options = {} if time_left is None else {"time_limit": max(time_left, 1e-3)}
        result = milp(
            -self.rewards[col_request],
            constraints=constraints,
            integrality=np.ones(n_cols),
            bounds=Bounds(lower, np.ones(n_cols)),
            options=options,
        )
        if result.x is None:
            return {}
        chosen = {}
        for j, w in zip(active, result.x):
            if w > 0.5:
                column = self.columns[j]
                chosen[self.requests[column.request].index] = column.path
        return chosen
