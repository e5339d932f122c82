"""Command implementations behind the ``oed`` entry point.

Each command loads what it needs from a :class:`RunConfig`, writes its
results under the output directory and returns True when every requested
output was written and every solution verified.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from src.config_loader import SCENARIO_IDS, RunConfig
from src.constellation.stations import StationSet
from src.constellation.visibility import TimeWindow
from src.harness.results import all_verified, aggregate, write_aggregate_csv, write_results_csv
from src.harness.scenarios import ScenarioRunner, scenario_one, scenario_three, scenario_two
from src.network.logical_graph import LogicalGraph, build_logical_graph
from src.network.requests import RequestBatch, generate_requests, load_batch_file
from src.solvers.exact import exact_solve
from src.solvers.greedy import bfs_path, greedy_solve
from src.solvers.solution import Solution
from src.solvers.verify import verify_solution
from src.utils.filesystem import ensure_directory, write_json

logger = logging.getLogger(__name__)


def _window_tag(window: TimeWindow) -> str:
    return f"tau{window.tau:g}_delta{window.delta:g}"


def _build_graph(config: RunConfig, stations: StationSet, window: TimeWindow) -> LogicalGraph:
    cfg = config.constellation
    logger.info(
        f"Building logical graph: R={cfg.rings} K={cfg.sats_per_ring} "
        f"tau={window.tau} delta={window.delta}"
    )
    return build_logical_graph(
        cfg, stations.coords, window, config.channel_seed, config.resources_per_node
    )


def cmd_graph(
    config: RunConfig,
    window: Optional[TimeWindow] = None,
    path_query: Optional[Tuple[str, str]] = None,
) -> bool:
    """Write the logical graph of one window as JSON and log its summary.

    Args:
        config: Run configuration.
        window: Window to build; defaults to the configured one.
        path_query: Optional (source, destination) station names; the
            minimum-hop unit-demand path between them is reported.
    """
    window = window or config.window
    stations = StationSet.from_csv(config.stations_csv)
    g = _build_graph(config, stations, window)

    summary = g.summary()
    document = g.to_dict(stations.names)
    document["summary"] = summary

    if path_query is not None:
        src, dst = stations.resolve(list(path_query))
        path = bfs_path(g, src, dst, 1, config.allow_ground_transit)
        if path is None:
            logger.info(f"No path {path_query[0]} -> {path_query[1]} in this window")
            document["path"] = None
        else:
            labels = [
                stations[v].name if g.is_ground(v) else g.node(v).label for v in path.vertices
            ]
            logger.info(
                f"Path {path_query[0]} -> {path_query[1]} ({len(path.hops)} hops): "
                f"{' - '.join(labels)}"
            )
            document["path"] = {"vertices": list(path.vertices), "labels": labels}

    cfg = config.constellation
    name = f"graph_R{cfg.rings}_K{cfg.sats_per_ring}_{_window_tag(window)}.json"
    out = Path(config.output_dir) / name
    write_json(document, out)
    logger.info(
        f"Graph: {summary['vertices']} vertices, {summary['edges']} edges, "
        f"{summary['connected_ground_stations']} ground stations with edges, "
        f"{summary['isl_edges']} sat-sat edges, {summary['ground_sat_edges']} sat-ground edges"
    )
    logger.info(f"Wrote {out}")
    return True


def _load_batch(config: RunConfig, stations: StationSet, window: TimeWindow) -> RequestBatch:
    if config.batch_file is not None:
        return RequestBatch(load_batch_file(config.batch_file, stations), window)
    requests = generate_requests(config.request_seed, config.request_count, len(stations))
    logger.info(f"Generated {len(requests)} requests with seed {config.request_seed}")
    return RequestBatch(requests, window, config.request_seed)


def _exact_runs(config: RunConfig) -> List[bool]:
    """``allow_isl`` for each exact solve requested, without duplicates."""
    runs = []
    if config.run_exact:
        runs.append(config.allow_isl)
    if config.run_restricted and False not in runs:
        runs.append(False)
    return runs


def cmd_solve(config: RunConfig) -> bool:
    """Solve one batch with the configured solvers and write the solutions."""
    window = config.window
    stations = StationSet.from_csv(config.stations_csv)
    batch = _load_batch(config, stations, window)
    g = _build_graph(config, stations, window)

    solutions: List[Tuple[Solution, bool]] = []
    if config.run_greedy:
        solutions.append((greedy_solve(g, batch, config.allow_ground_transit), True))
    for allow_isl in _exact_runs(config):
        sol = exact_solve(
            g,
            batch,
            allow_isl=allow_isl,
            allow_ground_transit=config.allow_ground_transit,
            time_limit_s=config.time_limit_s,
            backend=config.backend,
        )
        solutions.append((sol, allow_isl))

    ok = True
    entries = []
    for sol, allow_isl in solutions:
        report = verify_solution(g, batch, sol, allow_isl=allow_isl)
        ok = ok and bool(report)
        logger.info(
            f"{sol.solver.value}: reward {sol.total_reward}/{batch.total_reward}, "
            f"served {len(sol.served)}/{len(batch)}, optimal={sol.proven_optimal}, "
            f"{sol.runtime_s:.3f}s"
        )
        entry = sol.to_dict()
        entry["verification"] = report.to_dict()
        entries.append(entry)

    document = {
        "config": config.to_dict(),
        "requests": [r.to_dict() for r in batch.requests],
        "solutions": entries,
    }
    out = Path(config.output_dir) / f"solution_{_window_tag(window)}.json"
    write_json(document, out)
    logger.info(f"Wrote {out}")
    return ok


def make_runner(config: RunConfig, stations: StationSet, progress: bool = False) -> ScenarioRunner:
    return ScenarioRunner(
        template=config.constellation,
        stations=stations,
        channel_seed=config.channel_seed,
        resources=config.resources_per_node,
        allow_ground_transit=config.allow_ground_transit,
        time_limit_s=config.time_limit_s,
        backend=config.backend,
        workers=config.workers,
        progress=progress,
    )


def cmd_scenario(config: RunConfig, which: Sequence[str], progress: bool = False) -> bool:
    """Run the named scenarios and write their per-case and aggregate CSVs.

    Raises:
        ValueError: On an unknown scenario id.
    """
    bad = [s for s in which if s not in SCENARIO_IDS]
    if bad:
        raise ValueError(f"Unknown scenario id(s) {bad}, expected any of {SCENARIO_IDS}")

    stations = StationSet.from_csv(config.stations_csv)
    runner = make_runner(config, stations, progress)
    out_dir = ensure_directory(config.output_dir)

    ok = True
    for scenario in which:
        logger.info("=" * 60)
        logger.info(f"Scenario {scenario}")
        logger.info("=" * 60)
        if scenario == "i":
            results = scenario_one(runner)
            table = aggregate(results)
        elif scenario == "ii":
            results = scenario_two(runner, config.request_seed)
            table = aggregate(results)
        else:
            results, table = scenario_three(runner, config.request_seed)

        write_results_csv(results, out_dir / f"scenario_{scenario}.csv")
        write_aggregate_csv(table, out_dir / f"scenario_{scenario}_aggregate.csv")
        if not all_verified(results):
            logger.warning(f"Scenario {scenario}: some solutions failed verification")
            ok = False
        if scenario == "iii":
            for row in table.itertuples(index=False):
                logger.info(
                    f"  N={row.N:>2} R=K={row.R:>2} delta={row.delta:<5g} "
                    f"greedy {row.mean_ratio_greedy:.4f} rexact {row.mean_ratio_rexact:.4f} "
                    f"time greedy {row.mean_time_greedy_s:.4f}s exact {row.mean_time_exact_s:.4f}s"
                )
    return ok
