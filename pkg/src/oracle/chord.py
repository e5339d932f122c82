"""Straight-line distance between two points on the Earth's surface."""

import math

from src.constellation.geometry import GeoCoord

EARTH_RADIUS_KM = 6371.0


def chord_distance(a: GeoCoord, b: GeoCoord, radius: float = EARTH_RADIUS_KM) -> float:
    """Chord length between ``a`` and ``b`` on a sphere, via the central angle.

    Uses the haversine form of the central angle, so it does not share any
    arithmetic with the inertial-frame position code.
    """
    phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    # chord = 2R sin(theta/2) and sin(theta/2) = sqrt(h)
    return 2.0 * radius * math.sqrt(min(1.0, max(0.0, h)))
