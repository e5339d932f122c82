"""Line-of-sight communication ranges and window visibility tests.

Two nodes may be linked for a window ``[tau, tau + delta]`` only if their
distance stays within range at every sampled time of the window. Ground
stations are never linked to each other.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.constellation.geometry import (
    ConstellationConfig,
    GeoCoord,
    NodeId,
    distance,
    node_position,
)

logger = logging.getLogger(__name__)

# Tolerance (hours) for treating delta as a whole number of sample steps.
_STEP_SNAP_H = 1e-9


@dataclass(frozen=True)
class TimeWindow:
    """Operational interval ``[tau, tau + delta]`` in hours."""

    tau: float
    delta: float

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")

    @property
    def end(self) -> float:
        return self.tau + self.delta


def range_ground_sat(cfg: ConstellationConfig) -> float:
    """Satellite-to-ground range: slant range at zero elevation, in km."""
    a = cfg.orbit_radius_km
    re = cfg.earth_radius_km
    return math.sqrt(max(a * a - re * re, 0.0))


def range_sat_sat(cfg: ConstellationConfig) -> float:
    """Inter-satellite range: longest chord clearing the atmosphere cutoff, in km."""
    a = cfg.orbit_radius_km
    floor = cfg.earth_radius_km + cfg.atmosphere_cutoff_km
    return 2.0 * math.sqrt(max(a * a - floor * floor, 0.0))


def sample_times(cfg: ConstellationConfig, window: TimeWindow) -> np.ndarray:
    """Sampling instants of a window.

    Samples are ``tau + j * step`` for ``j = 0..n`` with
    ``n = floor(delta / step)``, plus ``tau + delta`` when delta is not a
    whole number of steps. A window whose delta is a multiple of the step
    therefore samples a prefix of any wider window with the same tau.
    ``delta == 0`` gives the single sample ``tau``.
    """
    step = cfg.sample_step_h
    n = int(math.floor(window.delta / step + _STEP_SNAP_H / step))
    times = window.tau + step * np.arange(n + 1)
    if window.delta - n * step > _STEP_SNAP_H:
        times = np.append(times, window.tau + window.delta)
    return times


def max_distance_over_window(
    cfg: ConstellationConfig,
    node_a: NodeId,
    node_b: NodeId,
    window: TimeWindow,
    coords: Optional[Sequence[GeoCoord]] = None,
) -> float:
    """Largest sampled distance between two nodes over a window, in km.

    Args:
        cfg: Constellation configuration.
        node_a: First node.
        node_b: Second node, distinct from ``node_a``.
        window: Time window.
        coords: Ground-station coordinates indexed by ground index; needed
            when either node is a ground station.
    """
    if node_a == node_b:
        raise ValueError(f"Nodes must differ: {node_a.label}")
    return max(
        distance(
            node_position(cfg, node_a, float(t), coords),
            node_position(cfg, node_b, float(t), coords),
        )
        for t in sample_times(cfg, window)
    )


def link_range(cfg: ConstellationConfig, node_a: NodeId, node_b: NodeId) -> float:
    """Communication range for a node pair; 0 for ground-ground pairs."""
    if node_a.is_ground and node_b.is_ground:
        return 0.0
    if node_a.is_satellite and node_b.is_satellite:
        return range_sat_sat(cfg)
    return range_ground_sat(cfg)


def edge_feasible(
    cfg: ConstellationConfig,
    node_a: NodeId,
    node_b: NodeId,
    window: TimeWindow,
    coords: Optional[Sequence[GeoCoord]] = None,
) -> bool:
    """Whether two nodes stay within range for the whole window."""
    if node_a == node_b:
        raise ValueError(f"Nodes must differ: {node_a.label}")
    if node_a.is_ground and node_b.is_ground:
        return False
    return max_distance_over_window(cfg, node_a, node_b, window, coords) <= link_range(
        cfg, node_a, node_b
    )
