"""Constellation geometry.

Positions of Walker-Star satellites and of ground stations as functions of
time, all expressed in one Earth-centered inertial frame (km). Time ``tau``
is in hours since midnight.

A satellite in ring ``r``, slot ``k`` sits at

    a * (cos u cos W, cos u sin W, sin u)

with ``a = earth_radius_km + altitude_km``, ascending node
``W = r * 180 / R`` and argument of latitude
``u = k * 360 / K + phase(r) + 360 * tau / period_h``. A ground station at
(lat, lon) sits at ``earth_radius_km * (cos lat cos L, cos lat sin L, sin lat)``
with ``L = lon + earth_rotation_deg_per_h * tau``.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

# Position vector in km, shape (3,).
Vec3 = np.ndarray


class PhaseOffsetMode(str, Enum):
    """Per-ring phase offset applied to the argument of latitude."""

    NONE = "none"
    WALKER = "walker"


@dataclass(frozen=True)
class ConstellationConfig:
    """Orbital, Earth and sampling parameters of the physical network.

    Attributes:
        rings: Number of polar orbital planes (R).
        sats_per_ring: Satellites per plane (K).
        altitude_km: Orbit altitude above the spherical Earth.
        period_h: Orbital period in hours.
        earth_radius_km: Radius of the spherical Earth.
        earth_rotation_deg_per_h: Rotation rate applied to ground stations.
        atmosphere_cutoff_km: Lowest altitude an inter-satellite line of
            sight may graze.
        phase_offset_mode: ``none`` or ``walker``.
        walker_spread_deg: Total phase spread across all rings in Walker
            mode (360 * F in Walker notation).
        sample_step_h: Sampling step used for window maxima.
    """

    rings: int
    sats_per_ring: int
    altitude_km: float = 550.0
    period_h: float = 1.5
    earth_radius_km: float = 6371.0
    earth_rotation_deg_per_h: float = 15.0
    atmosphere_cutoff_km: float = 85.0
    phase_offset_mode: PhaseOffsetMode = PhaseOffsetMode.NONE
    walker_spread_deg: float = 360.0
    sample_step_h: float = 0.001

    def __post_init__(self):
        if self.rings < 1 or self.sats_per_ring < 1:
            raise ValueError(
                f"rings and sats_per_ring must be >= 1 "
                f"(got R={self.rings}, K={self.sats_per_ring})"
            )
        if self.altitude_km <= 0:
            raise ValueError(f"altitude_km must be > 0, got {self.altitude_km}")
        if self.period_h <= 0:
            raise ValueError(f"period_h must be > 0, got {self.period_h}")
        if self.sample_step_h <= 0:
            raise ValueError(f"sample_step_h must be > 0, got {self.sample_step_h}")
        if self.earth_radius_km <= 0:
            raise ValueError(f"earth_radius_km must be > 0, got {self.earth_radius_km}")
        # Accept plain strings from JSON.
        object.__setattr__(self, "phase_offset_mode", PhaseOffsetMode(self.phase_offset_mode))

    @property
    def orbit_radius_km(self) -> float:
        """Orbital radius ``a = earth_radius_km + altitude_km``."""
        return self.earth_radius_km + self.altitude_km

    @property
    def num_satellites(self) -> int:
        return self.rings * self.sats_per_ring

    def with_size(self, rings: int, sats_per_ring: int) -> "ConstellationConfig":
        """Return a copy with a different R and K."""
        return ConstellationConfig(
            rings=rings,
            sats_per_ring=sats_per_ring,
            altitude_km=self.altitude_km,
            period_h=self.period_h,
            earth_radius_km=self.earth_radius_km,
            earth_rotation_deg_per_h=self.earth_rotation_deg_per_h,
            atmosphere_cutoff_km=self.atmosphere_cutoff_km,
            phase_offset_mode=self.phase_offset_mode,
            walker_spread_deg=self.walker_spread_deg,
            sample_step_h=self.sample_step_h,
        )

    def ring_phase_deg(self, r: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
        """Phase offset of ring ``r`` in degrees."""
        if self.phase_offset_mode is PhaseOffsetMode.WALKER:
            return r * self.walker_spread_deg / (self.rings * self.sats_per_ring)
        return r * 0.0


@dataclass(frozen=True)
class GeoCoord:
    """Geographic position of a ground station, in degrees.

    Longitude is normalized into (-180, 180] on construction.
    """

    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"Latitude out of range [-90, 90]: {self.lat}")
        lon = float(self.lon) % 360.0
        if lon > 180.0:
            lon -= 360.0
        object.__setattr__(self, "lon", lon)


class NodeKind(str, Enum):
    GROUND = "ground"
    SATELLITE = "satellite"


@dataclass(frozen=True)
class NodeId:
    """A physical node: ground station ``g`` or satellite ``(ring, slot)``.

    The canonical integer id is ``g`` for ground stations and
    ``G + ring * K + slot`` for satellites, where ``G`` is the number of
    ground stations and ``K`` the satellites per ring.
    """

    kind: NodeKind
    index: int = 0
    ring: int = 0
    slot: int = 0

    @classmethod
    def ground(cls, g: int) -> "NodeId":
        """Ground station number ``g``."""
        return cls(NodeKind.GROUND, index=g)

    @classmethod
    def satellite(cls, ring: int, slot: int) -> "NodeId":
        """Satellite ``slot`` of orbital ring ``ring``."""
        return cls(NodeKind.SATELLITE, ring=ring, slot=slot)

    @property
    def is_ground(self) -> bool:
        return self.kind is NodeKind.GROUND

    @property
    def is_satellite(self) -> bool:
        return self.kind is NodeKind.SATELLITE

    def canonical(self, num_ground: int, sats_per_ring: int) -> int:
        """Canonical integer id of this node.

        Args:
            num_ground: Number of ground stations G.
            sats_per_ring: Satellites per ring K.

        Returns:
            ``g`` for a ground station, ``G + ring * K + slot`` for a satellite.
        """
        if self.is_ground:
            return self.index
        return num_ground + self.ring * sats_per_ring + self.slot

    @classmethod
    def from_canonical(cls, cid: int, num_ground: int, sats_per_ring: int) -> "NodeId":
        """Inverse of :meth:`canonical`."""
        if cid < 0:
            raise IndexError(f"Negative canonical id: {cid}")
        if cid < num_ground:
            return cls.ground(cid)
        ring, slot = divmod(cid - num_ground, sats_per_ring)
        return cls.satellite(ring, slot)

    @property
    def label(self) -> str:
        """Short display name, ``G<g>`` or ``S<ring>.<slot>``."""
        if self.is_ground:
            return f"G{self.index}"
        return f"S{self.ring}.{self.slot}"

    def to_dict(self) -> dict:
        """JSON-ready form; ground stations carry ``index``, satellites ``ring`` and ``slot``."""
        if self.is_ground:
            return {"kind": self.kind.value, "index": self.index}
        return {"kind": self.kind.value, "ring": self.ring, "slot": self.slot}


def satellite_positions(
    cfg: ConstellationConfig,
    times: Union[float, Sequence[float], np.ndarray],
) -> np.ndarray:
    """Positions of every satellite at each of ``times``.

    Args:
        cfg: Constellation configuration.
        times: Scalar or 1-D array of times in hours.

    Returns:
        Array of shape (T, R*K, 3), satellites ordered ring-major
        (the canonical satellite order).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    rings = np.arange(cfg.rings)
    slots = np.arange(cfg.sats_per_ring)
    ring_grid, slot_grid = np.meshgrid(rings, slots, indexing="ij")
    ring_flat = ring_grid.ravel()
    slot_flat = slot_grid.ravel()
    return _satellite_xyz(cfg, ring_flat, slot_flat, times)


def satellite_position(cfg: ConstellationConfig, r: int, k: int, tau: float) -> Vec3:
    """Position of satellite ``(r, k)`` at time ``tau``.

    Raises:
        IndexError: If ``r`` or ``k`` is out of range.
    """
    if not 0 <= r < cfg.rings:
        raise IndexError(f"Ring index {r} out of range 0..{cfg.rings - 1}")
    if not 0 <= k < cfg.sats_per_ring:
        raise IndexError(f"Slot index {k} out of range 0..{cfg.sats_per_ring - 1}")
    xyz = _satellite_xyz(cfg, np.array([r]), np.array([k]), np.array([tau], dtype=float))
    return xyz[0, 0]


def _satellite_xyz(
    cfg: ConstellationConfig,
    ring: np.ndarray,
    slot: np.ndarray,
    times: np.ndarray,
) -> np.ndarray:
    raan = np.radians(ring * (180.0 / cfg.rings))
    base_deg = slot * (360.0 / cfg.sats_per_ring) + cfg.ring_phase_deg(ring)
    u = np.radians(base_deg[np.newaxis, :] + 360.0 * (times[:, np.newaxis] / cfg.period_h))
    a = cfg.orbit_radius_km
    cos_u = np.cos(u)
    xyz = np.empty(u.shape + (3,))
    xyz[..., 0] = a * cos_u * np.cos(raan)
    xyz[..., 1] = a * cos_u * np.sin(raan)
    xyz[..., 2] = a * np.sin(u)
    return xyz


def ground_positions(
    cfg: ConstellationConfig,
    coords: Sequence[GeoCoord],
    times: Union[float, Sequence[float], np.ndarray],
) -> np.ndarray:
    """Positions of the given ground stations at each of ``times``.

    Returns:
        Array of shape (T, G, 3).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    lat = np.radians(np.array([c.lat for c in coords], dtype=float))
    lon_deg = np.array([c.lon for c in coords], dtype=float)
    lam = np.radians(lon_deg[np.newaxis, :] + cfg.earth_rotation_deg_per_h * times[:, np.newaxis])
    re = cfg.earth_radius_km
    cos_lat = np.cos(lat)[np.newaxis, :]
    xyz = np.empty(lam.shape + (3,))
    xyz[..., 0] = re * cos_lat * np.cos(lam)
    xyz[..., 1] = re * cos_lat * np.sin(lam)
    xyz[..., 2] = re * np.broadcast_to(np.sin(lat)[np.newaxis, :], lam.shape)
    return xyz


def ground_position(cfg: ConstellationConfig, geo: GeoCoord, tau: float) -> Vec3:
    """Position of a ground station at time ``tau``."""
    return ground_positions(cfg, [geo], tau)[0, 0]


def node_positions(
    cfg: ConstellationConfig,
    coords: Sequence[GeoCoord],
    times: Union[float, Sequence[float], np.ndarray],
) -> np.ndarray:
    """Positions of all nodes in canonical id order.

    Returns:
        Array of shape (T, G + R*K, 3).
    """
    ground = ground_positions(cfg, coords, times)
    sats = satellite_positions(cfg, times)
    return np.concatenate([ground, sats], axis=1)


def node_position(
    cfg: ConstellationConfig,
    node: NodeId,
    tau: float,
    coords: Optional[Sequence[GeoCoord]] = None,
) -> Vec3:
    """Position of any node; ground nodes need the station ``coords``."""
    if node.is_satellite:
        return satellite_position(cfg, node.ring, node.slot, tau)
    if coords is None:
        raise ValueError("Ground node position requires station coordinates")
    return ground_position(cfg, coords[node.index], tau)


def distance(p: Vec3, q: Vec3) -> float:
    """Euclidean distance between two points, in km."""
    return float(pairwise_distance(np.asarray(p), np.asarray(q)))


def pairwise_distance(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Element-wise Euclidean distance over the last axis (size 3).

    Components are combined explicitly so scalar and batched calls give
    bit-identical results.
    """
    dx = p[..., 0] - q[..., 0]
    dy = p[..., 1] - q[..., 1]
    dz = p[..., 2] - q[..., 2]
    return np.sqrt(dx * dx + dy * dy + dz * dz)
