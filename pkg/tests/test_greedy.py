from src.network.logical_graph import LogicalGraph
from src.network.requests import Request
from src.solvers.greedy import bfs_path, greedy_order, greedy_solve
from src.solvers.solution import SolverKind

from conftest import batch_of


def test_single_request_through_one_satellite():
    g = LogicalGraph.synthetic(2, 1, {(0, 2): 1, (2, 1): 1})
    sol = greedy_solve(g, batch_of((0, 1, 1, 4)))
    assert sol.solver is SolverKind.GREEDY
    assert sol.served == {0}
    assert sol.total_reward == 4
    assert sol.paths[0].vertices == (0, 2, 1)
    assert not sol.proven_optimal


def test_edgeless_graph_serves_nothing():
    g = LogicalGraph.synthetic(2, 3, {})
    sol = greedy_solve(g, batch_of((0, 1, 1, 4), (1, 0, 2, 2)))
    assert sol.served == frozenset()
    assert sol.total_reward == 0


def test_higher_ratio_wins_the_bottleneck():
    g = LogicalGraph.synthetic(2, 1, {(0, 2): 1, (2, 1): 1})
    sol = greedy_solve(g, batch_of((0, 1, 1, 3), (0, 1, 1, 5)))
    assert sol.served == {1}
    assert sol.total_reward == 5


def test_input_graph_is_not_modified(blocking):
    g, batch = blocking
    before = g.to_dict()
    greedy_solve(g, batch)
    assert g.to_dict() == before


def test_greedy_takes_the_blocking_route(blocking):
    g, batch = blocking
    sol = greedy_solve(g, batch)
    assert sol.served == {0}
    assert sol.paths[0].vertices == (0, 4, 1)
    assert sol.total_reward == 3


def test_greedy_order_ties_by_index():
    requests = [
        Request(0, 1, 4, 2, index=0),
        Request(0, 1, 1, 3, index=1),
        Request(0, 1, 2, 1, index=2),
        Request(0, 1, 1, 1, index=3),
    ]
    assert [r.index for r in greedy_order(requests)] == [1, 3, 0, 2]


def test_two_hop_path():
    g = LogicalGraph.synthetic(2, 1, {(0, 2): 3, (2, 1): 3})
    assert bfs_path(g, 0, 1, 2).vertices == (0, 2, 1)


def test_saturated_edges_give_no_path():
    g = LogicalGraph.synthetic(2, 2, {(0, 2): 1, (2, 1): 1, (0, 3): 2, (3, 1): 1})
    assert bfs_path(g, 0, 1, 2) is None


def test_diamond_prefers_the_route_with_channels():
    g = LogicalGraph.synthetic(2, 3, {(0, 2): 1, (2, 1): 1, (0, 3): 2, (3, 4): 2, (4, 1): 2})
    assert bfs_path(g, 0, 1, 1).vertices == (0, 2, 1)
    assert bfs_path(g, 0, 1, 2).vertices == (0, 3, 4, 1)


def test_neighbours_expand_in_ascending_order():
    g = LogicalGraph.synthetic(2, 2, {(0, 3): 1, (3, 1): 1, (0, 2): 1, (2, 1): 1})
    assert bfs_path(g, 0, 1, 1).vertices == (0, 2, 1)


def test_ground_transit_is_opt_in():
    # 0 - sat 3 - ground 2 - sat 4 - 1
    g = LogicalGraph.synthetic(3, 2, {(0, 3): 1, (3, 2): 1, (2, 4): 1, (4, 1): 1})
    assert bfs_path(g, 0, 1, 1) is None
    assert bfs_path(g, 0, 1, 1, allow_ground_transit=True).vertices == (0, 3, 2, 4, 1)


def test_endpoint_budgets_are_checked():
    g = LogicalGraph.synthetic(2, 1, {(0, 2): 5, (2, 1): 5})
    g.graph.nodes[0]["transmitters"] = 1
    assert bfs_path(g, 0, 1, 2) is None
    assert bfs_path(g, 1, 0, 2).vertices == (1, 2, 0)
    g.graph.nodes[0]["receivers"] = 1
    assert bfs_path(g, 1, 0, 2) is None


def test_relay_budget_is_checked():
    g = LogicalGraph.synthetic(2, 2, {(0, 2): 5, (2, 1): 5, (0, 3): 5, (3, 1): 5})
    g.graph.nodes[2]["memories"] = 3
    assert bfs_path(g, 0, 1, 2).vertices == (0, 3, 1)
