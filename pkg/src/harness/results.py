"""Scenario result rows and their CSV tables."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from src.utils.filesystem import ensure_directory

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "scenario",
    "N",
    "R",
    "K",
    "delta",
    "tau",
    "seed",
    "reward_greedy",
    "reward_exact",
    "reward_rexact",
    "time_greedy_s",
    "time_exact_s",
    "ratio_greedy",
    "ratio_rexact",
]
AGGREGATE_KEYS = ["N", "R", "delta"]


def reward_ratio(reward: int, reward_exact: int) -> float:
    """``reward / reward_exact``, defined as 1.0 when the optimum is 0."""
    if reward_exact == 0:
        return 1.0
    return reward / reward_exact


@dataclass(frozen=True)
class ScenarioResult:
    """One evaluated case: a (constellation, window, batch) cell.

    Attributes:
        scenario: Scenario and sweep id, e.g. ``i.1`` or ``iii``.
        N: Number of requests.
        R: Rings.
        K: Satellites per ring.
        delta: Window length in hours.
        tau: Window start in hours.
        seed: Request seed, None for fixed batches.
        reward_greedy / reward_exact / reward_rexact: Rewards per solver.
        time_greedy_s / time_exact_s / time_rexact_s: Runtimes per solver.
        served_greedy / served_exact / served_rexact: Served request counts.
        exact_limited: True if an exact solve hit its time limit.
        verified: True if every solution passed verification.
        j: Start-time index within a Scenario iii batch (1-based), else 0.
    """

    scenario: str
    N: int
    R: int
    K: int
    delta: float
    tau: float
    seed: Optional[int]
    reward_greedy: int
    reward_exact: int
    reward_rexact: int
    time_greedy_s: float
    time_exact_s: float
    time_rexact_s: float
    served_greedy: int
    served_exact: int
    served_rexact: int
    exact_limited: bool = False
    verified: bool = True
    j: int = 0

    @property
    def ratio_greedy(self) -> float:
        return reward_ratio(self.reward_greedy, self.reward_exact)

    @property
    def ratio_rexact(self) -> float:
        return reward_ratio(self.reward_rexact, self.reward_exact)

    def to_row(self) -> dict:
        row = {column: getattr(self, column) for column in CSV_COLUMNS}
        row["time_rexact_s"] = self.time_rexact_s
        row["exact_limited"] = self.exact_limited
        return row


def results_frame(results: Sequence[ScenarioResult]) -> pd.DataFrame:
    """Frame with one row per result, in the given order."""
    frame = pd.DataFrame(
        [r.to_row() for r in results],
        columns=CSV_COLUMNS + ["time_rexact_s", "exact_limited"],
    )
    frame["seed"] = frame["seed"].astype("Int64")
    return frame


def write_results_csv(results: Sequence[ScenarioResult], path: Union[str, Path]) -> Path:
    """Write the per-case table with exactly the published columns."""
    path = Path(path)
    ensure_directory(path.parent)
    results_frame(results)[CSV_COLUMNS].to_csv(path, index=False)
    logger.info(f"Wrote {len(results)} rows to {path}")
    return path


def aggregate(results: Sequence[ScenarioResult]) -> pd.DataFrame:
    """Per (N, R, delta) row: mean ratios, mean and median runtimes.

    Cases where an exact solve hit its time limit are excluded from the
    ratio means and counted in ``limited``.
    """
    frame = results_frame(results)
    if frame.empty:
        return pd.DataFrame(columns=AGGREGATE_KEYS + ["cases", "limited"])

    rows = []
    for key, group in frame.groupby(AGGREGATE_KEYS, sort=True):
        complete = group[~group["exact_limited"]]
        rows.append(
            {
                "N": key[0],
                "R": key[1],
                "delta": key[2],
                "cases": len(group),
                "limited": int(group["exact_limited"].sum()),
                "mean_ratio_greedy": complete["ratio_greedy"].mean(),
                "mean_ratio_rexact": complete["ratio_rexact"].mean(),
                "mean_time_greedy_s": group["time_greedy_s"].mean(),
                "mean_time_exact_s": group["time_exact_s"].mean(),
                "mean_time_rexact_s": group["time_rexact_s"].mean(),
                "median_time_greedy_s": group["time_greedy_s"].median(),
                "median_time_exact_s": group["time_exact_s"].median(),
            }
        )
    table = pd.DataFrame(rows)
    limited = int(table["limited"].sum())
    if limited:
        logger.warning(f"{limited} case(s) hit the exact time limit and are excluded from ratio means")
    return table


def write_aggregate_csv(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    table.to_csv(path, index=False)
    logger.info(f"Wrote aggregate table ({len(table)} rows) to {path}")
    return path


def all_verified(results: List[ScenarioResult]) -> bool:
    return all(r.verified for r in results)
