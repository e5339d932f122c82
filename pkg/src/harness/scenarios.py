"""Evaluation scenarios.

Scenario i: one NYC-Singapore request (demand 1, reward 1), tau = 0.
  i.1: R = K in {10, 20}, delta = 0.00..0.30 in steps of 0.01.
  i.2: delta in {0, 0.1}, R = K = 1..25.
Scenario ii: 20 seeded random requests, tau = 0.
  ii.1: R = K in {10, 20}, delta = 0.00..0.30 in steps of 0.01.
  ii.2: delta in {0.01, 0.1}, R = K = 1..20.
Scenario iii: N in {10, 20, 30}, R = K in {10, 15, 20},
  delta in {0.1, 0.05, 0.01, 0.001}, j = 1..48 with tau = 0.5 (j - 1) and
  request seed ``base_seed + 1000 N + j``; 1728 cases in total.

Every case is solved by the greedy, exact and ISL-free exact solvers and
each solution is verified against the pristine graph.
"""

import logging
import multiprocessing
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from src.constellation.geometry import ConstellationConfig
from src.constellation.stations import StationSet
from src.constellation.visibility import TimeWindow
from src.harness.results import ScenarioResult, aggregate
from src.network.logical_graph import DEFAULT_RESOURCES, LogicalGraph, build_logical_graph
from src.network.requests import Request, RequestBatch, generate_requests
from src.solvers.exact import exact_solve
from src.solvers.greedy import greedy_solve
from src.solvers.verify import verify_solution

logger = logging.getLogger(__name__)

SWEEP_DELTAS = [round(0.01 * i, 2) for i in range(31)]
SCENARIO_ONE_PAIR = ("NYC", "Singapore")
SCENARIO_TWO_REQUESTS = 20
SCENARIO_THREE_SIZES = (10, 20, 30)
SCENARIO_THREE_RINGS = (10, 15, 20)
SCENARIO_THREE_DELTAS = (0.1, 0.05, 0.01, 0.001)
SCENARIO_THREE_STARTS = 48


@dataclass(frozen=True)
class Case:
    """One cell of a sweep.

    ``requests`` holds a fixed batch; when it is None the batch is drawn
    from ``seed`` with ``n`` requests.
    """

    scenario: str
    rings: int
    sats_per_ring: int
    tau: float
    delta: float
    n: int
    seed: Optional[int] = None
    requests: Optional[Tuple[Request, ...]] = None
    j: int = 0


@dataclass
class ScenarioRunner:
    """Solves sweep cases, caching logical graphs per (R, K, tau, delta).

    Attributes:
        template: Constellation parameters; R and K are set per case.
        stations: Ground-station dataset.
        channel_seed: Seed of the per-edge channel hash.
        resources: Per-vertex resource budget.
        allow_ground_transit: Whether ground stations may relay.
        time_limit_s: Optional limit per exact solve.
        backend: Exact solver backend.
        workers: Worker processes; 1 runs in-process.
        progress: Show a progress bar.
        cache_size: Logical graphs kept in memory.
    """

    template: ConstellationConfig
    stations: StationSet
    channel_seed: int = 7
    resources: int = DEFAULT_RESOURCES
    allow_ground_transit: bool = False
    time_limit_s: Optional[float] = None
    backend: str = "bnb"
    workers: int = 1
    progress: bool = False
    cache_size: int = 64
    _graphs: "OrderedDict[tuple, LogicalGraph]" = field(default_factory=OrderedDict, repr=False)

    def graph(self, rings: int, sats_per_ring: int, tau: float, delta: float) -> LogicalGraph:
        """Logical graph of a cell, built once per (R, K, tau, delta)."""
        key = (rings, sats_per_ring, tau, delta)
        if key in self._graphs:
            self._graphs.move_to_end(key)
            return self._graphs[key]
        graph = build_logical_graph(
            self.template.with_size(rings, sats_per_ring),
            self.stations.coords,
            TimeWindow(tau, delta),
            self.channel_seed,
            self.resources,
        )
        self._graphs[key] = graph
        while len(self._graphs) > self.cache_size:
            self._graphs.popitem(last=False)
        return graph

    def batch(self, case: Case) -> RequestBatch:
        window = TimeWindow(case.tau, case.delta)
        if case.requests is not None:
            return RequestBatch(list(case.requests), window)
        return RequestBatch(generate_requests(case.seed, case.n, len(self.stations)), window, case.seed)

    def run_case(self, case: Case) -> ScenarioResult:
        g = self.graph(case.rings, case.sats_per_ring, case.tau, case.delta)
        batch = self.batch(case)

        greedy = greedy_solve(g, batch, self.allow_ground_transit)
        exact = exact_solve(
            g, batch, True, self.allow_ground_transit, self.time_limit_s, self.backend
        )
        rexact = exact_solve(
            g, batch, False, self.allow_ground_transit, self.time_limit_s, self.backend
        )
        verified = all(
            bool(verify_solution(g, batch, sol, allow_isl=sol is not rexact))
            for sol in (greedy, exact, rexact)
        )
        if not verified:
            logger.warning(f"Verification failed for case {case}")

        return ScenarioResult(
            scenario=case.scenario,
            N=len(batch),
            R=case.rings,
            K=case.sats_per_ring,
            delta=case.delta,
            tau=case.tau,
            seed=case.seed,
            reward_greedy=greedy.total_reward,
            reward_exact=exact.total_reward,
            reward_rexact=rexact.total_reward,
            time_greedy_s=greedy.runtime_s,
            time_exact_s=exact.runtime_s,
            time_rexact_s=rexact.runtime_s,
            served_greedy=len(greedy.served),
            served_exact=len(exact.served),
            served_rexact=len(rexact.served),
            exact_limited=not (exact.proven_optimal and rexact.proven_optimal),
            verified=verified,
            j=case.j,
        )

    def run(self, cases: Sequence[Case], desc: str = "cases") -> List[ScenarioResult]:
        """Solve ``cases``; results come back in input order."""
        cases = list(cases)
        logger.info(f"Running {len(cases)} {desc} with {self.workers} worker(s)")
        bar = tqdm(total=len(cases), desc=desc, disable=not self.progress)
        results = []
        if self.workers <= 1:
            for case in cases:
                results.append(self.run_case(case))
                bar.update()
        else:
            with multiprocessing.Pool(self.workers, initializer=_init_worker, initargs=(self,)) as pool:
                for result in pool.imap(_run_in_worker, cases, chunksize=4):
                    results.append(result)
                    bar.update()
        bar.close()
        return results


_worker_runner: Optional[ScenarioRunner] = None


def _init_worker(runner: ScenarioRunner) -> None:
    global _worker_runner
    _worker_runner = runner


def _run_in_worker(case: Case) -> ScenarioResult:
    return _worker_runner.run_case(case)


def scenario_one_cases(stations: StationSet) -> List[Case]:
    src, dst = stations.resolve(list(SCENARIO_ONE_PAIR))
    requests = (Request(src, dst, 1, 1, index=0),)
    cases = [
        Case("i.1", size, size, 0.0, delta, 1, requests=requests)
        for size in (10, 20)
        for delta in SWEEP_DELTAS
    ]
    cases += [
        Case("i.2", size, size, 0.0, delta, 1, requests=requests)
        for delta in (0.0, 0.1)
        for size in range(1, 26)
    ]
    return cases


def scenario_two_cases(seed: int) -> List[Case]:
    n = SCENARIO_TWO_REQUESTS
    cases = [
        Case("ii.1", size, size, 0.0, delta, n, seed=seed)
        for size in (10, 20)
        for delta in SWEEP_DELTAS
    ]
    cases += [
        Case("ii.2", size, size, 0.0, delta, n, seed=seed)
        for delta in (0.01, 0.1)
        for size in range(1, 21)
    ]
    return cases


def scenario_three_cases(base_seed: int) -> List[Case]:
    cases = [
        Case("iii", size, size, 0.5 * (j - 1), delta, n, seed=base_seed + 1000 * n + j, j=j)
        for n in SCENARIO_THREE_SIZES
        for size in SCENARIO_THREE_RINGS
        for delta in SCENARIO_THREE_DELTAS
        for j in range(1, SCENARIO_THREE_STARTS + 1)
    ]
    # Fixed (N, R, delta, j) order regardless of how the sweep is scheduled.
    cases.sort(key=lambda c: (c.n, c.rings, c.delta, c.j))
    return cases


def scenario_one(runner: ScenarioRunner) -> List[ScenarioResult]:
    """Single NYC-Singapore request over delta and constellation-size sweeps."""
    return runner.run(scenario_one_cases(runner.stations), desc="scenario i")


def scenario_two(runner: ScenarioRunner, seed: int) -> List[ScenarioResult]:
    """Twenty random requests over delta and constellation-size sweeps."""
    return runner.run(scenario_two_cases(seed), desc="scenario ii")


def scenario_three(
    runner: ScenarioRunner, base_seed: int
) -> Tuple[List[ScenarioResult], pd.DataFrame]:
    """The 1728-case sweep over N, R = K, delta and start time.

    Returns:
        The per-case results and their per (N, R, delta) aggregate table.
    """
    cases = scenario_three_cases(base_seed)
    # Solve cells sharing a graph back to back, then restore the fixed order.
    schedule = sorted(
        range(len(cases)),
        key=lambda i: (cases[i].rings, cases[i].delta, cases[i].j, cases[i].n),
    )
    solved = runner.run([cases[i] for i in schedule], desc="scenario iii")
    results: List[Optional[ScenarioResult]] = [None] * len(cases)
    for i, result in zip(schedule, solved):
        results[i] = result
    return results, aggregate(results)
