"""
Physical network model.

This package provides satellite and ground-station positions over time,
line-of-sight communication ranges, and the ground-station dataset.
"""

from .geometry import ConstellationConfig, GeoCoord, NodeId, NodeKind, PhaseOffsetMode
from .stations import Station, StationSet
from .visibility import TimeWindow, edge_feasible, range_ground_sat, range_sat_sat

__all__ = [
    "ConstellationConfig",
    "GeoCoord",
    "NodeId",
    "NodeKind",
    "PhaseOffsetMode",
    "Station",
    "StationSet",
    "TimeWindow",
    "edge_feasible",
    "range_ground_sat",
    "range_sat_sat",
]
