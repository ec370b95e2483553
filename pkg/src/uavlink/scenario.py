"""Scenario configuration and reproducible BS deployment."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .airchannel import ChannelMode, EnvParams
from .antenna import BsAntenna, UavAntenna
from .geometry import Position3D, RegionSpec, distance_3d, horizontal_distance
from .rng import RngStream, as_generator
from .units import dbm_to_watts, dbw_to_watts

__all__ = [
    "Averaging",
    "BsLayout",
    "ClosestMetric",
    "Position3D",
    "RegionSpec",
    "RngStream",
    "ScenarioConfig",
    "as_generator",
    "deploy_bs",
    "deploy_bs_grid",
    "deploy_bs_uniform",
    "distance_3d",
    "horizontal_distance",
]

DEFAULT_NOISE_W = dbm_to_watts(-174.0 + 60.0)  # -174 dBm/Hz over 1 MHz


class BsLayout(enum.Enum):
    UNIFORM = "uniform"
    GRID = "grid"
    FIXED = "fixed"


class ClosestMetric(enum.Enum):
    DISTANCE_3D = "3d"
    HORIZONTAL = "horizontal"


class Averaging(enum.Enum):
    LINEAR = "linear"
    DB = "db"


@dataclass(frozen=True)
class ScenarioConfig:
    region: RegionSpec = field(default_factory=lambda: RegionSpec(1000.0, 1000.0))
    bs_count: int = 10
    bs_height: float = 30.0
    bs_tx_power: float = dbw_to_watts(-6.0)
    env: EnvParams = field(default_factory=EnvParams)
    bs_antenna: BsAntenna = field(default_factory=BsAntenna)
    uav_antenna: UavAntenna = field(default_factory=UavAntenna)
    uav_xy: tuple[float, float] | None = None
    noise_power: float = DEFAULT_NOISE_W
    seed: int = 0
    channel_mode: ChannelMode = ChannelMode.EXPECTED
    layout: BsLayout = BsLayout.UNIFORM
    bs_xy: tuple[tuple[float, float], ...] = ()
    closest_metric: ClosestMetric = ClosestMetric.DISTANCE_3D
    full_reuse: bool = True
    averaging: Averaging = Averaging.LINEAR

    def __post_init__(self):
        if self.bs_count < 1:
            raise ValueError(f"bs_count must be >= 1, got {self.bs_count}")
        if self.bs_height < 0.0:
            raise ValueError("bs_height must be non-negative")
        if not (self.bs_tx_power > 0.0 and self.noise_power > 0.0):
            raise ValueError("transmit and noise powers must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.uav_xy is None:
            object.__setattr__(self, "uav_xy", self.region.center)
        if not self.region.contains(*self.uav_xy):
            raise ValueError(f"UAV position {self.uav_xy} lies outside the region")
        if self.layout is BsLayout.FIXED:
            if len(self.bs_xy) != self.bs_count:
                raise ValueError(
                    f"fixed layout lists {len(self.bs_xy)} BS positions but bs_count={self.bs_count}"
                )
            for x, y in self.bs_xy:
                if not self.region.contains(x, y):
                    raise ValueError(f"BS position ({x}, {y}) lies outside the region")

    def uav_position(self, height: float) -> Position3D:
        return Position3D(self.uav_xy[0], self.uav_xy[1], height)


def deploy_bs_uniform(region: RegionSpec, n: int, height: float, rng) -> list[Position3D]:
    """Drop ``n`` BSs i.i.d. uniformly over ``region`` at a common height."""
    xy = uniform_xy(region, n, rng)
    return [Position3D(float(x), float(y), height) for x, y in xy]


def uniform_xy(region: RegionSpec, n: int, rng) -> np.ndarray:
    if n < 1:
        raise ValueError(f"need at least one BS, got n={n}")
    gen = as_generator(rng)
    xy = gen.random((n, 2))
    return xy * np.array([region.width, region.depth])


def grid_xy(region: RegionSpec, n: int) -> np.ndarray:
    """Centers of the first ``n`` cells of a near-square grid, row-major."""
    if n < 1:
        raise ValueError(f"need at least one BS, got n={n}")
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    k = np.arange(n)
    x = (k % cols + 0.5) * region.width / cols
    y = (k // cols + 0.5) * region.depth / rows
    return np.column_stack([x, y])


def deploy_bs_grid(region: RegionSpec, n: int, height: float) -> list[Position3D]:
    return [Position3D(float(x), float(y), height) for x, y in grid_xy(region, n)]


def deploy_xy(cfg: ScenarioConfig, rng) -> np.ndarray:
    """BS horizontal coordinates, shape (bs_count, 2), for the configured layout."""
    if cfg.layout is BsLayout.UNIFORM:
        return uniform_xy(cfg.region, cfg.bs_count, rng)
    if cfg.layout is BsLayout.GRID:
        return grid_xy(cfg.region, cfg.bs_count)
    return np.array(cfg.bs_xy, dtype=float).reshape(-1, 2)


def deploy_bs(cfg: ScenarioConfig, rng) -> list[Position3D]:
    return [Position3D(float(x), float(y), cfg.bs_height) for x, y in deploy_xy(cfg, rng)]
