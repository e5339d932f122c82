import pandas as pd
import pytest

from src.constellation.geometry import ConstellationConfig
from src.harness.results import (
    AGGREGATE_KEYS,
    CSV_COLUMNS,
    ScenarioResult,
    aggregate,
    reward_ratio,
    write_aggregate_csv,
    write_results_csv,
)
from src.harness.scenarios import (
    Case,
    ScenarioRunner,
    scenario_one_cases,
    scenario_three,
    scenario_three_cases,
    scenario_two_cases,
)
from src.network.requests import Request


def result(n=10, r=10, delta=0.1, greedy=3, exact=4, rexact=1, limited=False, **extra):
    values = dict(
        scenario="iii",
        N=n,
        R=r,
        K=r,
        delta=delta,
        tau=0.0,
        seed=1,
        reward_greedy=greedy,
        reward_exact=exact,
        reward_rexact=rexact,
        time_greedy_s=0.01,
        time_exact_s=0.5,
        time_rexact_s=0.2,
        served_greedy=1,
        served_exact=1,
        served_rexact=1,
        exact_limited=limited,
    )
    values.update(extra)
    return ScenarioResult(**values)


def test_reward_ratio():
    assert reward_ratio(3, 4) == 0.75
    assert reward_ratio(0, 0) == 1.0
    assert result(greedy=0, exact=0, rexact=0).ratio_rexact == 1.0


def test_scenario_one_sweep(stations):
    cases = scenario_one_cases(stations)
    assert len(cases) == 112
    assert sum(c.scenario == "i.1" for c in cases) == 62
    assert sum(c.scenario == "i.2" for c in cases) == 50
    assert {c.delta for c in cases if c.scenario == "i.1"} == {round(0.01 * i, 2) for i in range(31)}
    assert {c.rings for c in cases if c.scenario == "i.2"} == set(range(1, 26))
    request = cases[0].requests[0]
    assert (request.src, request.dst) == tuple(stations.resolve(["NYC", "Singapore"]))
    assert all(c.tau == 0.0 for c in cases)


def test_scenario_two_sweep():
    cases = scenario_two_cases(2024)
    assert len(cases) == 102
    assert sum(c.scenario == "ii.2" for c in cases) == 40
    assert all(c.seed == 2024 and c.n == 20 for c in cases)


def test_scenario_three_sweep():
    cases = scenario_three_cases(500)
    assert len(cases) == 1728
    first = cases[0]
    assert (first.n, first.rings, first.delta, first.j) == (10, 10, 0.001, 1)
    for case in cases:
        assert case.seed == 500 + 1000 * case.n + case.j
        assert case.tau == pytest.approx(0.5 * (case.j - 1))
        assert case.rings == case.sats_per_ring
    keys = [(c.n, c.rings, c.delta, c.j) for c in cases]
    assert keys == sorted(keys)
    assert len(set(keys)) == 1728


class RecordingRunner:
    """Stands in for a runner; answers each case with a synthetic result."""

    def __init__(self):
        self.order = []

    def run(self, cases, desc="cases"):
        self.order = list(cases)
        return [
            result(n=c.n, r=c.rings, delta=c.delta, greedy=c.j % 3, exact=2, rexact=0, j=c.j, seed=c.seed)
            for c in cases
        ]


def test_scenario_three_restores_case_order():
    runner = RecordingRunner()
    results, table = scenario_three(runner, 0)
    cases = scenario_three_cases(0)
    assert [(r.N, r.R, r.delta, r.j) for r in results] == [(c.n, c.rings, c.delta, c.j) for c in cases]
    scheduled = [(c.rings, c.delta, c.j) for c in runner.order]
    assert scheduled == sorted(scheduled)
    assert len(table) == 36
    assert (table["cases"] == 48).all()
    # greedy reward cycles 1, 2, 0 over j against an optimum of 2
    assert table["mean_ratio_greedy"].iloc[0] == pytest.approx(0.5)


def test_aggregate_excludes_limited_cases():
    results = [
        result(greedy=2, exact=4),
        result(greedy=4, exact=4),
        result(greedy=0, exact=4, limited=True),
        result(n=20, greedy=1, exact=1),
    ]
    table = aggregate(results)
    assert list(table.columns[:3]) == AGGREGATE_KEYS
    first = table.iloc[0]
    assert first["cases"] == 3
    assert first["limited"] == 1
    assert first["mean_ratio_greedy"] == pytest.approx(0.75)
    assert first["mean_ratio_rexact"] == pytest.approx(0.25)
    assert table.iloc[1]["N"] == 20


def test_aggregate_of_nothing():
    assert aggregate([]).empty


def test_results_csv_columns(tmp_path):
    path = write_results_csv([result(), result(seed=None)], tmp_path / "out" / "scenario.csv")
    header = path.read_text().splitlines()[0]
    assert header.split(",") == CSV_COLUMNS
    frame = pd.read_csv(path)
    assert len(frame) == 2
    assert frame["ratio_greedy"].iloc[0] == pytest.approx(0.75)
    assert pd.isna(frame["seed"].iloc[1])

    table_path = write_aggregate_csv(aggregate([result()]), tmp_path / "agg.csv")
    assert pd.read_csv(table_path)["cases"].tolist() == [1]


def test_run_case_on_a_small_constellation(stations):
    runner = ScenarioRunner(template=ConstellationConfig(rings=6, sats_per_ring=6), stations=stations)
    src, dst = stations.resolve(["London", "Paris"])
    case = Case("i.1", 6, 6, 0.0, 0.01, 1, requests=(Request(src, dst, 1, 1),))
    row = runner.run_case(case)
    assert row.verified
    assert not row.exact_limited
    assert row.reward_greedy <= row.reward_exact
    assert row.reward_rexact <= row.reward_exact
    assert row.N == 1 and row.R == 6 and row.seed is None


def test_seeded_case_draws_its_batch(stations):
    runner = ScenarioRunner(template=ConstellationConfig(rings=4, sats_per_ring=4), stations=stations)
    case = Case("ii.1", 4, 4, 0.0, 0.0, 5, seed=3)
    batch = runner.batch(case)
    assert len(batch) == 5 and batch.seed == 3
    first, second = runner.run([case, case])
    assert first.seed == 3
    assert (first.reward_greedy, first.reward_exact, first.reward_rexact) == (
        second.reward_greedy,
        second.reward_exact,
        second.reward_rexact,
    )


def test_graph_cache_is_bounded(stations):
    runner = ScenarioRunner(
        template=ConstellationConfig(rings=2, sats_per_ring=2), stations=stations, cache_size=2
    )
    first = runner.graph(2, 2, 0.0, 0.0)
    assert runner.graph(2, 2, 0.0, 0.0) is first
    runner.graph(2, 2, 1.0, 0.0)
    runner.graph(2, 2, 2.0, 0.0)
    assert len(runner._graphs) == 2
    assert runner.graph(2, 2, 0.0, 0.0) is not first
