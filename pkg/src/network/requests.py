"""Connection requests and seeded batch generation."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

from src.constellation.stations import StationSet
from src.constellation.visibility import TimeWindow
from src.utils.rng import CounterRng

logger = logging.getLogger(__name__)

MIN_VALUE = 1
MAX_VALUE = 5


@dataclass(frozen=True)
class Request:
    """Connection request ``(src, dst, demand, reward)``.

    ``src`` and ``dst`` are ground indices, which are also the vertex ids of
    the stations in any logical graph. ``index`` is the position in the
    batch.
    """

    src: int
    dst: int
    demand: int
    reward: int
    index: int = 0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"Request {self.index}: source and destination are both {self.src}")
        if self.demand < 1:
            raise ValueError(f"Request {self.index}: demand must be >= 1, got {self.demand}")
        if self.reward < 1:
            raise ValueError(f"Request {self.index}: reward must be >= 1, got {self.reward}")

    @property
    def ratio(self) -> Fraction:
        """Exact reward per unit of demand; the greedy solver orders by it."""
        return Fraction(self.reward, self.demand)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "src": self.src,
            "dst": self.dst,
            "demand": self.demand,
            "reward": self.reward,
        }


@dataclass
class RequestBatch:
    """Requests served together over one window."""

    requests: List[Request]
    window: TimeWindow
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    def __getitem__(self, i: int) -> Request:
        return self.requests[i]

    @property
    def total_reward(self) -> int:
        return sum(r.reward for r in self.requests)


def generate_requests(seed: int, n: int, num_stations: int) -> List[Request]:
    """Draw ``n`` requests over ``num_stations`` ground stations.

    Draw order per request, from one :class:`CounterRng` stream: source
    (uniform over stations), destination (redrawn until it differs from the
    source), demand in 1..5, reward in 1..5.

    Raises:
        ValueError: If fewer than two stations or ``n < 1``.
    """
    if num_stations < 2:
        raise ValueError(f"Need at least 2 ground stations, got {num_stations}")
    if n < 1:
        raise ValueError(f"Need at least 1 request, got {n}")

    rng = CounterRng(seed)
    requests = []
    for i in range(n):
        src = rng.uniform(num_stations)
        dst = rng.uniform(num_stations)
        while dst == src:
            dst = rng.uniform(num_stations)
        demand = rng.integers(MIN_VALUE, MAX_VALUE)
        reward = rng.integers(MIN_VALUE, MAX_VALUE)
        requests.append(Request(src, dst, demand, reward, index=i))
    return requests


def parse_batch_lines(lines: Sequence[str], stations: StationSet) -> List[Request]:
    """Parse ``src_city dst_city demand reward`` lines.

    Blank lines and lines starting with ``#`` are skipped.

    Raises:
        UnknownStationError: Listing every unresolved city name.
        ValueError: On malformed lines.
    """
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"Line {lineno}: expected 'src dst demand reward', got '{line}'")
        try:
            demand, reward = int(parts[2]), int(parts[3])
        except ValueError:
            raise ValueError(f"Line {lineno}: demand and reward must be integers: '{line}'") from None
        rows.append((parts[0], parts[1], demand, reward))

    indices = stations.resolve([name for row in rows for name in row[:2]])
    return [
        Request(indices[2 * i], indices[2 * i + 1], demand, reward, index=i)
        for i, (_, _, demand, reward) in enumerate(rows)
    ]


def load_batch_file(path: Union[str, Path], stations: StationSet) -> List[Request]:
    """Read a manual batch file.

    Raises:
        FileNotFoundError: If the file doesn't exist.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Batch file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        requests = parse_batch_lines(f.readlines(), stations)
    logger.info(f"Loaded {len(requests)} requests from {path}")
    return requests
