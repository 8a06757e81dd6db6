"""Cell topology generation and two-layer NOMA capacities.

All powers are linear W/Hz and all rates are spectral efficiencies in bps/Hz.
dBm/Hz values only appear at the configuration boundary (see ``dbm_to_watt``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

_LN2 = math.log(2.0)

NOISE_DBM_HZ = -174.0
D_MIN_M = 10.0


class Group(enum.Enum):
    NEAR = "near"
    FAR = "far"


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def path_loss_db(distance_km):
    """Distance-dependent path loss ``128.1 + 37.6 log10(d[km])`` in dB."""
    return 128.1 + 37.6 * np.log10(distance_km)


@dataclass(frozen=True)
class Receiver:
    id: int
    distance_m: float
    gain: float
    noise: float
    group: Group

    def __post_init__(self):
        if not (self.gain > 0 and self.noise > 0 and self.distance_m > 0):
            raise ConfigError(f"receiver {self.id}: gain, noise and distance must be positive")

    @property
    def inv_snr(self) -> float:
        """Noise-to-gain ratio sigma^2 / |h|^2."""
        return self.noise / self.gain


@dataclass(frozen=True)
class PowerAllocation:
    p_far: float
    p_near: float

    def __post_init__(self):
        if self.p_far < 0 or self.p_near < 0:
            raise ConfigError("power components must be non-negative")

    @property
    def total(self) -> float:
        return self.p_far + self.p_near

    def within(self, p_max: float, rtol: float = 1e-12) -> bool:
        return self.total <= p_max * (1.0 + rtol)

    @classmethod
    def split(cls, p_max: float, p_near: float) -> "PowerAllocation":
        return cls(p_far=max(p_max - p_near, 0.0), p_near=p_near)


@dataclass(frozen=True)
class Topology:
    receivers: tuple[Receiver, ...]
    p_max: float
    r_min: float
    cell_radius_m: float
    # derived arrays, indexed by receiver id
    gains: np.ndarray = field(init=False, repr=False, compare=False)
    noises: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = [r.id for r in self.receivers]
        if ids != list(range(len(ids))):
            raise ConfigError("receiver ids must be 0..M-1 in order")
        if self.r_min < 0:
            raise ConfigError("r_min must be non-negative")
        if self.p_max <= 0:
            raise ConfigError("p_max must be positive")
        gains = np.array([r.gain for r in self.receivers], dtype=float)
        noises = np.array([r.noise for r in self.receivers], dtype=float)
        gains.setflags(write=False)
        noises.setflags(write=False)
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "noises", noises)

    @property
    def num_receivers(self) -> int:
        return len(self.receivers)

    @property
    def near_ids(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.receivers if r.group is Group.NEAR)

    @property
    def all_ids(self) -> tuple[int, ...]:
        return tuple(range(len(self.receivers)))

    def with_power(self, p_max: float) -> "Topology":
        return Topology(self.receivers, p_max, self.r_min, self.cell_radius_m)

    def far_capacities(self, p: PowerAllocation) -> np.ndarray:
        g, n = self.gains, self.noises
        return np.log1p(p.p_far * g / (p.p_near * g + n)) / _LN2

    def near_capacities(self, p: PowerAllocation) -> np.ndarray:
        return np.log1p(p.p_near * self.gains / self.noises) / _LN2

    def full_power_capacities(self) -> np.ndarray:
        return np.log1p(self.p_max * self.gains / self.noises) / _LN2


def capacity_far(r: Receiver, p: PowerAllocation) -> float:
    """Rate at which ``r`` decodes the far-layer signal, treating the near layer as noise."""
    return math.log1p(p.p_far * r.gain / (p.p_near * r.gain + r.noise)) / _LN2


def capacity_near(r: Receiver, p: PowerAllocation) -> float:
    """Interference-free rate of the near layer after SIC has removed the far layer."""
    return math.log1p(p.p_near * r.gain / r.noise) / _LN2


def _inside_hexagon(x, y, circumradius):
    # vertices on the x axis; edge normals at 30, 90 and 150 degrees
    apothem = circumradius * math.sqrt(3.0) / 2.0
    inside = np.ones_like(x, dtype=bool)
    for phi in (math.pi / 6, math.pi / 2, 5 * math.pi / 6):
        inside &= np.abs(x * math.cos(phi) + y * math.sin(phi)) <= apothem
    return inside


def sample_hexagon(rng: np.random.Generator, n: int, circumradius: float,
                   d_min: float = D_MIN_M) -> np.ndarray:
    """Uniform points in a hexagon centred at the origin, at least ``d_min`` from it.

    Rejection sampling from the bounding disc; returns an ``(n, 2)`` array.
    """
    out = np.empty((0, 2))
    while len(out) < n:
        k = max(2 * (n - len(out)), 8)
        rad = circumradius * np.sqrt(rng.random(k))
        ang = 2 * math.pi * rng.random(k)
        x, y = rad * np.cos(ang), rad * np.sin(ang)
        keep = _inside_hexagon(x, y, circumradius) & (rad >= d_min)
        out = np.vstack([out, np.column_stack([x[keep], y[keep]])])
    return out[:n]


def generate_topology(num_receivers: int, cell_radius_m: float, seed: int, *,
                      p_max: float = dbm_to_watt(-42.6), r_min: float = 0.4,
                      noise_dbm_hz: float = NOISE_DBM_HZ, d_min_m: float = D_MIN_M) -> Topology:
    """Drop ``num_receivers`` receivers uniformly in a hexagonal cell and draw block fades.

    Each receiver gets path loss from its distance times an independent
    unit-mean exponential (Rayleigh power) fade. Receivers closer than
    ``cell_radius_m / 2`` form the near (SIC-capable) group.
    """
    if num_receivers < 1:
        raise ConfigError("num_receivers must be >= 1")
    if not cell_radius_m > 0:
        raise ConfigError("cell_radius_m must be positive")
    if not 0 <= d_min_m < cell_radius_m * math.sqrt(3) / 2:
        raise ConfigError("d_min_m must lie inside the cell")
    rng = np.random.default_rng(seed)
    pts = sample_hexagon(rng, num_receivers, cell_radius_m, d_min_m)
    dist = np.hypot(pts[:, 0], pts[:, 1])
    fades = rng.exponential(1.0, num_receivers)
    gains = 10.0 ** (-path_loss_db(dist / 1000.0) / 10.0) * fades
    noise = dbm_to_watt(noise_dbm_hz)
    receivers = tuple(
        Receiver(
            id=m,
            distance_m=float(dist[m]),
            gain=float(gains[m]),
            noise=noise,
            group=Group.NEAR if dist[m] < cell_radius_m / 2 else Group.FAR,
        )
        for m in range(num_receivers)
    )
    return Topology(receivers, p_max=p_max, r_min=r_min, cell_radius_m=cell_radius_m)
