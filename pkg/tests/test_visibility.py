import math
from dataclasses import replace

import numpy as np
import pytest

from src.constellation.geometry import ConstellationConfig, GeoCoord, NodeId
from src.constellation.visibility import (
    TimeWindow,
    edge_feasible,
    max_distance_over_window,
    range_ground_sat,
    range_sat_sat,
    sample_times,
)
from src.oracle.chord import chord_distance


def test_default_ranges():
    cfg = ConstellationConfig(rings=10, sats_per_ring=10)
    assert range_ground_sat(cfg) == pytest.approx(2703.81, abs=0.01)
    assert range_sat_sat(cfg) == pytest.approx(4988.11, abs=0.01)


def test_range_formulas_at_the_extremes():
    cfg = ConstellationConfig(rings=1, sats_per_ring=1, altitude_km=1000.0)
    assert range_ground_sat(cfg) == pytest.approx(math.sqrt(7371.0**2 - 6371.0**2))
    assert range_ground_sat(cfg) == pytest.approx(3706.98, abs=0.01)

    grazing = ConstellationConfig(rings=1, sats_per_ring=1, atmosphere_cutoff_km=0.0)
    assert range_sat_sat(grazing) == pytest.approx(2 * range_ground_sat(grazing))
    assert range_sat_sat(grazing) == pytest.approx(5407.63, abs=0.01)

    own_altitude = ConstellationConfig(rings=1, sats_per_ring=1, atmosphere_cutoff_km=550.0)
    assert range_sat_sat(own_altitude) == 0.0


def test_sample_times(cfg4):
    np.testing.assert_allclose(sample_times(cfg4, TimeWindow(2.0, 0.0)), [2.0])
    assert len(sample_times(cfg4, TimeWindow(0.0, 0.01))) == 11
    np.testing.assert_allclose(
        sample_times(cfg4, TimeWindow(1.0, 0.0015)), [1.0, 1.001, 1.0015]
    )


def test_sample_times_are_prefixes(cfg4):
    short = sample_times(cfg4, TimeWindow(0.5, 0.005))
    long = sample_times(cfg4, TimeWindow(0.5, 0.05))
    np.testing.assert_allclose(long[: len(short)], short)
    assert long[-1] == pytest.approx(0.55)


def test_window_rejects_negative_values():
    with pytest.raises(ValueError):
        TimeWindow(-1.0, 0.1)
    with pytest.raises(ValueError):
        TimeWindow(0.0, -0.1)


def test_satellite_overhead_is_visible(cfg4):
    coords = [GeoCoord(0.0, 0.0)]
    station, sat = NodeId.ground(0), NodeId.satellite(0, 0)
    window = TimeWindow(0.0, 0.0)
    assert max_distance_over_window(cfg4, station, sat, window, coords) == pytest.approx(550.0)
    assert edge_feasible(cfg4, station, sat, window, coords)


def test_ground_stations_never_link(cfg4, stations):
    nyc, singapore = stations.resolve(["NYC", "Singapore"])
    assert not edge_feasible(
        cfg4, NodeId.ground(nyc), NodeId.ground(singapore), TimeWindow(0.0, 0.1), stations.coords
    )


@pytest.mark.parametrize("k,expected", [(8, False), (10, True)])
def test_adjacent_ring_neighbours(k, expected):
    cfg = ConstellationConfig(rings=2, sats_per_ring=k)
    window = TimeWindow(0.3, 0.2)
    assert edge_feasible(cfg, NodeId.satellite(1, 0), NodeId.satellite(1, 1), window) is expected


def test_ground_pair_distance_is_fixed_chord(cfg4, stations):
    a, b = stations.resolve(["London", "Tokyo"])
    measured = max_distance_over_window(
        cfg4, NodeId.ground(a), NodeId.ground(b), TimeWindow(3.0, 0.2), stations.coords
    )
    assert measured == pytest.approx(chord_distance(stations[a].geo, stations[b].geo), abs=1e-6)


def test_same_node_is_rejected(cfg4):
    with pytest.raises(ValueError):
        max_distance_over_window(cfg4, NodeId.satellite(0, 0), NodeId.satellite(0, 0), TimeWindow(0, 0))


def test_coarser_sampling_changes_only_the_step(cfg4):
    coarse = replace(cfg4, sample_step_h=0.01)
    assert len(sample_times(coarse, TimeWindow(0.0, 0.05))) == 6
