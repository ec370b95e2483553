"""Circular-flight propulsion energy, cyclic service delay and energy efficiency.

A fixed-wing UAV circles at constant speed over a disc of ground nodes and
serves them one at a time in a fixed cyclic order, one equal slot per node
per lap.  Only propulsion energy enters the efficiency denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .airchannel import EnvParams, expected_channel_gain, los_probability
from .geometry import Position3D
from .rng import as_generator
from .units import dbm_to_watts

DEFAULT_LAP_STEPS = 3600


@dataclass(frozen=True)
class EnergyParams:
    c1: float = 9.26e-4
    c2: float = 2250.0
    gravity: float = 9.8

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0 and self.gravity > 0):
            raise ValueError("c1, c2 and gravity must be positive")


@dataclass(frozen=True)
class FlightConfig:
    radius: float = 1000.0
    speed: float = 30.0
    duration: float = 1.0
    uav_height: float = 100.0
    uav_tx_power: float = dbm_to_watts(30.0)
    bandwidth: float = 1e6
    noise_density: float = dbm_to_watts(-174.0)

    def __post_init__(self):
        if not (self.radius > 0 and self.duration > 0):
            raise ValueError("radius and duration must be positive")
        if self.speed <= 0:
            raise ValueError(f"speed must be positive, got {self.speed}")
        if self.uav_height < 0 or self.uav_tx_power < 0:
            raise ValueError("uav_height and uav_tx_power must be non-negative")
        if not (self.bandwidth > 0 and self.noise_density > 0):
            raise ValueError("bandwidth and noise_density must be positive")

    @property
    def lap_time(self) -> float:
        return 2.0 * math.pi * self.radius / self.speed

    def replace(self, **changes) -> "FlightConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class ServiceRing:
    """Ground nodes (height 0) around a disc centered on the flight circle's center."""

    node_count: int
    node_positions: tuple[Position3D, ...]
    area_radius: float = 1000.0

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if len(self.node_positions) != self.node_count:
            raise ValueError("node_positions length differs from node_count")
        for p in self.node_positions:
            if math.hypot(p.x, p.y) > self.area_radius * (1 + 1e-12):
                raise ValueError(f"node ({p.x}, {p.y}) lies outside the service disc")

    @classmethod
    def equal_angle(cls, n: int, area_radius: float = 1000.0, ring_radius: float | None = None):
        """``n`` nodes at equal angles on a circle (default radius area_radius / 2)."""
        if n < 1:
            raise ValueError("node_count must be >= 1")
        rho = area_radius / 2.0 if ring_radius is None else ring_radius
        ang = 2.0 * math.pi * np.arange(n) / n
        pts = tuple(Position3D(rho * math.cos(a), rho * math.sin(a), 0.0) for a in ang)
        return cls(n, pts, area_radius)

    @classmethod
    def uniform_disc(cls, n: int, area_radius: float, rng):
        if n < 1:
            raise ValueError("node_count must be >= 1")
        gen = as_generator(rng)
        rho = area_radius * np.sqrt(gen.random(n))
        ang = 2.0 * math.pi * gen.random(n)
        pts = tuple(
            Position3D(float(r * math.cos(a)), float(r * math.sin(a)), 0.0) for r, a in zip(rho, ang)
        )
        return cls(n, pts, area_radius)


def propulsion_power(speed, radius: float, ep: EnergyParams):
    """Propulsion power in watts for steady circular flight."""
    speed = np.asarray(speed, dtype=float)
    if np.any(speed <= 0):
        raise ValueError("speed must be positive")
    k = ep.c1 + ep.c2 / (ep.gravity**2 * radius**2)
    p = k * speed**3 + ep.c2 / speed
    return p.item() if p.ndim == 0 else p


def propulsion_energy(cfg: FlightConfig, ep: EnergyParams) -> float:
    return cfg.duration * propulsion_power(cfg.speed, cfg.radius, ep)


def optimal_speed(radius: float, ep: EnergyParams) -> float:
    """Speed minimizing propulsion power on a circle of the given radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    k = ep.c1 + ep.c2 / (ep.gravity**2 * radius**2)
    return (ep.c2 / (3.0 * k)) ** 0.25


def cyclic_delay(ring: ServiceRing, cfg: FlightConfig) -> float:
    """Longest gap a node waits between its service slots: (N-1)/N of a lap."""
    n = ring.node_count
    return (n - 1) * cfg.lap_time / n


def _slot_rates(ring: ServiceRing, cfg: FlightConfig, env: EnvParams, steps: int) -> np.ndarray:
    n = ring.node_count
    if steps < n:
        raise ValueError(f"lap needs at least one step per node: steps={steps} < N={n}")
    k = np.arange(steps)
    ang = 2.0 * math.pi * (k + 0.5) / steps
    ux, uy = cfg.radius * np.cos(ang), cfg.radius * np.sin(ang)
    served = (k * n) // steps
    nx = np.array([p.x for p in ring.node_positions])[served]
    ny = np.array([p.y for p in ring.node_positions])[served]
    nh = np.array([p.h for p in ring.node_positions])[served]
    r = np.hypot(ux - nx, uy - ny)
    d = np.sqrt(r**2 + (cfg.uav_height - nh) ** 2)
    # ground node plays the BS role in the height-interpolated LOS model
    p_los = los_probability(nh, cfg.uav_height, r, env)
    g_c = expected_channel_gain(d, p_los, env)
    snr = cfg.uav_tx_power * g_c / (cfg.noise_density * cfg.bandwidth)
    return cfg.bandwidth * np.log2(1.0 + snr)


def lap_throughput(
    ring: ServiceRing, cfg: FlightConfig, env: EnvParams, steps: int = DEFAULT_LAP_STEPS
) -> float:
    """Bits delivered over one lap, midpoint-integrated over ``steps`` equal time steps."""
    rates = _slot_rates(ring, cfg, env, steps)
    return math.fsum(rates) * cfg.lap_time / steps


def energy_per_lap(cfg: FlightConfig, ep: EnergyParams) -> float:
    return cfg.lap_time * propulsion_power(cfg.speed, cfg.radius, ep)


def energy_efficiency(
    ring: ServiceRing,
    cfg: FlightConfig,
    env: EnvParams,
    ep: EnergyParams,
    steps: int = DEFAULT_LAP_STEPS,
) -> float:
    """Bits per joule of propulsion energy over one lap."""
    return lap_throughput(ring, cfg, env, steps) / energy_per_lap(cfg, ep)


def efficiency_optimal_speed(
    ring: ServiceRing,
    cfg: FlightConfig,
    env: EnvParams,
    ep: EnergyParams,
    bounds: tuple[float, float] = (1.0, 200.0),
    steps: int = DEFAULT_LAP_STEPS,
) -> float:
    res = minimize_scalar(
        lambda v: -energy_efficiency(ring, cfg.replace(speed=v), env, ep, steps),
        bounds=bounds,
        method="bounded",
        options={"xatol": 1e-4},
    )
    return float(res.x)
