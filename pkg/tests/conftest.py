"""Shared fixtures: the shipped dataset, small hand-built graphs, tiny random instances."""

from pathlib import Path

import numpy as np
import pytest

from src.constellation.geometry import ConstellationConfig
from src.constellation.stations import StationSet
from src.constellation.visibility import TimeWindow
from src.network.logical_graph import LogicalGraph
from src.network.requests import Request, RequestBatch

REPO_ROOT = Path(__file__).resolve().parent.parent
INPUT_DIR = REPO_ROOT / "input"

WINDOW = TimeWindow(0.0, 0.0)


@pytest.fixture(scope="session")
def stations() -> StationSet:
    return StationSet.from_csv(INPUT_DIR / "stations.csv")


@pytest.fixture(scope="session")
def config_path() -> Path:
    return INPUT_DIR / "config.json"


@pytest.fixture
def cfg4() -> ConstellationConfig:
    return ConstellationConfig(rings=4, sats_per_ring=4)


def batch_of(*requests) -> RequestBatch:
    """Batch from ``(src, dst, demand, reward)`` tuples, indexed in order."""
    return RequestBatch(
        [Request(s, t, d, w, index=i) for i, (s, t, d, w) in enumerate(requests)], WINDOW
    )


def blocking_instance():
    """Greedy's best-ratio choice blocks the other request; both fit jointly.

    Ground 0..3, satellites 4..6. Request 0 (0 -> 1, reward 3) has a 2-hop
    route through satellite 4 and a 3-hop route 0-5-6-1. Request 1
    (2 -> 3, reward 2) can only relay through satellite 4, which has memory
    for a single relay.
    """
    g = LogicalGraph.synthetic(
        4,
        3,
        {(0, 4): 1, (4, 1): 1, (0, 5): 1, (5, 6): 1, (6, 1): 1, (2, 4): 1, (4, 3): 1},
    )
    g.graph.nodes[4]["memories"] = 2
    return g, batch_of((0, 1, 1, 3), (2, 3, 1, 2))


@pytest.fixture
def blocking():
    return blocking_instance()


def random_tiny_instance(seed: int):
    """At most 8 vertices and 3 requests, small channels and budgets."""
    rng = np.random.default_rng(seed)
    num_ground = int(rng.integers(2, 5))
    num_sats = int(rng.integers(1, 8 - num_ground + 1))
    edges = {}
    for u in range(num_ground + num_sats):
        for v in range(max(u + 1, num_ground), num_ground + num_sats):
            if rng.random() < 0.5:
                edges[(u, v)] = int(rng.integers(1, 4))
    g = LogicalGraph.synthetic(num_ground, num_sats, edges)
    for v in g.vertices:
        attrs = g.graph.nodes[v]
        attrs["transmitters"] = int(rng.integers(1, 5))
        attrs["receivers"] = int(rng.integers(1, 5))
        attrs["memories"] = int(rng.integers(1, 7))

    requests = []
    for _ in range(int(rng.integers(1, 4))):
        s, t = rng.choice(num_ground, size=2, replace=False)
        requests.append((int(s), int(t), int(rng.integers(1, 3)), int(rng.integers(1, 6))))
    return g, batch_of(*requests)
