"""
Evaluation harness.

This package runs the three evaluation scenarios and writes their per-case
and aggregate CSV tables.
"""

from .results import (
    CSV_COLUMNS,
    ScenarioResult,
    aggregate,
    reward_ratio,
    write_aggregate_csv,
    write_results_csv,
)
from .scenarios import ScenarioRunner, scenario_one, scenario_three, scenario_two

__all__ = [
    "CSV_COLUMNS",
    "ScenarioResult",
    "ScenarioRunner",
    "aggregate",
    "reward_ratio",
    "scenario_one",
    "scenario_three",
    "scenario_two",
    "write_aggregate_csv",
    "write_results_csv",
]
