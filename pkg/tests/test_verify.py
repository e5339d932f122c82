import pytest

from src.network.logical_graph import EntanglementPath, LogicalGraph
from src.solvers.greedy import greedy_solve
from src.solvers.solution import Solution, SolverKind
from src.solvers.verify import SolutionVerifier, verify_solution

from conftest import batch_of, random_tiny_instance


def make_solution(paths, reward, solver=SolverKind.EXACT, served=None, ground_transit=False):
    return Solution(
        served=frozenset(paths if served is None else served),
        paths=paths,
        total_reward=reward,
        solver=solver,
        allow_ground_transit=ground_transit,
    )


def test_greedy_outputs_verify(blocking):
    g, batch = blocking
    assert verify_solution(g, batch, greedy_solve(g, batch))
    for seed in range(20):
        g, batch = random_tiny_instance(seed)
        assert verify_solution(g, batch, greedy_solve(g, batch))


def test_joint_oversubscription_fails():
    g = LogicalGraph.synthetic(2, 1, {(0, 2): 1, (2, 1): 1})
    batch = batch_of((0, 1, 1, 1), (0, 1, 1, 1))
    sol = make_solution({0: EntanglementPath((0, 2, 1), 1), 1: EntanglementPath((0, 2, 1), 1)}, 2)
    report = verify_solution(g, batch, sol)
    assert not report
    assert report.kinds() == ["channel_capacity"]
    assert report.to_dict()["valid"] is False


def test_vertex_budgets_are_summed():
    g = LogicalGraph.synthetic(2, 2, {(0, 2): 5, (2, 1): 5, (0, 3): 5, (3, 1): 5}, resources=1)
    batch = batch_of((0, 1, 1, 1), (0, 1, 1, 1))
    sol = make_solution({0: EntanglementPath((0, 2, 1), 1), 1: EntanglementPath((0, 3, 1), 1)}, 2)
    kinds = verify_solution(g, batch, sol).kinds()
    assert "transmitters" in kinds
    assert "receivers" in kinds
    assert "memories" in kinds


def test_tampered_reward_fails(blocking):
    g, batch = blocking
    sol = greedy_solve(g, batch)
    sol.total_reward += 1
    assert verify_solution(g, batch, sol).kinds() == ["reward_mismatch"]


def test_restricted_solution_may_not_use_isl(blocking):
    g, batch = blocking
    sol = make_solution({0: EntanglementPath((0, 5, 6, 1), 1)}, 3, solver=SolverKind.RESTRICTED_EXACT)
    assert verify_solution(g, batch, sol).kinds() == ["isl_forbidden"]
    assert verify_solution(g, batch, make_solution(sol.paths, 3))


def test_path_checks(blocking):
    g, batch = blocking
    verifier = SolutionVerifier(g, batch)

    wrong_end = make_solution({0: EntanglementPath((0, 4, 3), 1)}, 3)
    assert "endpoint_mismatch" in verifier.verify(wrong_end).kinds()

    wrong_demand = make_solution({0: EntanglementPath((0, 4, 1), 2)}, 3)
    assert "endpoint_mismatch" in verifier.verify(wrong_demand).kinds()

    missing = make_solution({0: EntanglementPath((0, 6, 1), 1)}, 3)
    assert verifier.verify(missing).kinds() == ["missing_edge"]

    unknown = make_solution({7: EntanglementPath((0, 4, 1), 1)}, 0)
    assert verifier.verify(unknown).kinds() == ["unknown_request"]

    mismatch = make_solution({0: EntanglementPath((0, 4, 1), 1)}, 3, served={0, 1})
    assert "path_set_mismatch" in verifier.verify(mismatch).kinds()


def test_ground_relays_need_permission():
    g = LogicalGraph.synthetic(3, 2, {(0, 3): 1, (3, 2): 1, (2, 4): 1, (4, 1): 1})
    batch = batch_of((0, 1, 1, 2))
    path = {0: EntanglementPath((0, 3, 2, 4, 1), 1)}
    assert verify_solution(g, batch, make_solution(path, 2)).kinds() == ["ground_transit"]
    assert verify_solution(g, batch, make_solution(path, 2, ground_transit=True))


def test_non_simple_path_is_flagged():
    g = LogicalGraph.synthetic(2, 2, {(0, 2): 5, (2, 3): 5, (3, 2): 5, (2, 1): 5})
    batch = batch_of((0, 1, 1, 1))
    sol = make_solution({0: EntanglementPath((0, 2, 3, 2, 1), 1)}, 1)
    assert "not_simple" in verify_solution(g, batch, sol).kinds()


@pytest.mark.parametrize("vertices", [(), (0,)])
def test_degenerate_path_is_reported_not_raised(blocking, vertices):
    g, batch = blocking
    sol = make_solution({0: EntanglementPath(vertices, 1)}, 3)
    report = verify_solution(g, batch, sol)
    assert not report
    assert report.kinds() == ["endpoint_mismatch"]
    assert report.violations[0].request == 0
