import pytest

from src.exceptions import FlowConsistencyError
from src.network.logical_graph import LogicalGraph
from src.solvers.paths import FlowAssignment, extract_paths, trace_path

from conftest import batch_of


@pytest.fixture
def ring_graph():
    """Ground 0, 1; satellites 2..7 with a 3-cycle 5-6-7 hanging off the route."""
    edges = {(0, 2): 5, (2, 3): 5, (3, 1): 5, (5, 6): 5, (6, 7): 5, (5, 7): 5, (2, 4): 5, (4, 3): 5}
    return LogicalGraph.synthetic(2, 6, edges)


def test_single_path_verbatim(ring_graph):
    flows = FlowAssignment({0: 1}, {0: {(0, 2), (2, 3), (3, 1)}})
    paths = extract_paths(flows, ring_graph, batch_of((0, 1, 2, 1)))
    assert paths[0].vertices == (0, 2, 3, 1)
    assert paths[0].demand == 2


def test_disjoint_cycle_is_dropped(ring_graph):
    arcs = {(0, 2), (2, 3), (3, 1), (5, 6), (6, 7), (7, 5)}
    paths = extract_paths(FlowAssignment({0: 1}, {0: arcs}), ring_graph, batch_of((0, 1, 1, 1)))
    assert paths[0].vertices == (0, 2, 3, 1)


def test_unadmitted_request_is_absent(ring_graph):
    flows = FlowAssignment({0: 0, 1: 1}, {0: set(), 1: {(1, 3), (3, 2), (2, 0)}})
    paths = extract_paths(flows, ring_graph, batch_of((0, 1, 1, 1), (1, 0, 1, 1)))
    assert set(paths) == {1}
    assert paths[1].vertices == (1, 3, 2, 0)


def test_antiparallel_arcs_cancel():
    flows = FlowAssignment({0: 1}, {0: {(0, 2), (2, 4), (4, 2), (2, 1)}})
    assert flows.arcs[0] == {(0, 2), (2, 1)}


def test_conservation_violation_is_reported(ring_graph):
    flows = FlowAssignment({0: 1}, {0: {(0, 2), (2, 3)}})
    with pytest.raises(FlowConsistencyError):
        extract_paths(flows, ring_graph, batch_of((0, 1, 1, 1)))


def test_arc_off_the_graph_is_reported(ring_graph):
    flows = FlowAssignment({0: 1}, {0: {(0, 5), (5, 1)}})
    with pytest.raises(FlowConsistencyError):
        extract_paths(flows, ring_graph, batch_of((0, 1, 1, 1)))


def test_trace_cuts_a_loop_on_the_route():
    arcs = {(0, 2), (2, 5), (5, 6), (6, 2), (2, 1)}
    path = trace_path(arcs, 0, 1)
    assert path[0] == 0 and path[-1] == 1
    assert len(set(path)) == len(path)


def test_trace_dead_end():
    with pytest.raises(FlowConsistencyError):
        trace_path({(0, 2)}, 0, 1)
