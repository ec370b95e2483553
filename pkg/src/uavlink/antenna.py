"""BS vertical main/side-lobe pattern and the UAV's downward receive cone."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Position3D, distance_3d, horizontal_distance

# Beam gain of a directional antenna as a function of its beamwidth in degrees.
BEAM_GAIN_NUMERATOR = 29000.0


class LobeTag(enum.Enum):
    MAIN_LOBE = "main"
    SIDE_LOBE = "side"


class UavAntennaMode(enum.Enum):
    OMNI = "omni"
    DIRECTIONAL_DOWN = "directional_down"


@dataclass(frozen=True)
class BsAntenna:
    """Horizontally omnidirectional BS antenna with one vertical beam.

    ``theta_b`` is the vertical beamwidth and ``theta_t`` the downtilt, both in
    degrees.  Gains are linear.
    """

    theta_b: float = 30.0
    theta_t: float = 8.0
    g_main: float = 10.0
    g_side: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.theta_b < 180.0:
            raise ValueError(f"theta_b must lie in (0, 180) degrees, got {self.theta_b}")
        if not self.g_main > self.g_side > 0.0:
            raise ValueError(f"need g_main > g_side > 0, got {self.g_main}, {self.g_side}")

    @property
    def msr(self) -> float:
        return self.g_main / self.g_side

    def with_msr(self, msr: float) -> "BsAntenna":
        if not msr > 1.0:
            raise ValueError(f"MSR must exceed 1 (side lobe weaker than main lobe), got {msr}")
        return BsAntenna(self.theta_b, self.theta_t, self.g_main, self.g_main / msr)

    def with_downtilt(self, theta_t: float) -> "BsAntenna":
        return BsAntenna(self.theta_b, theta_t, self.g_main, self.g_side)


@dataclass(frozen=True)
class UavAntenna:
    mode: UavAntennaMode = UavAntennaMode.OMNI
    phi_b: float = 180.0
    g_back: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.phi_b <= 180.0:
            raise ValueError(f"phi_b must lie in (0, 180] degrees, got {self.phi_b}")
        if self.g_back < 0.0:
            raise ValueError("g_back must be non-negative")

    @property
    def is_omni(self) -> bool:
        return self.mode is UavAntennaMode.OMNI or self.phi_b == 180.0

    @property
    def beam_gain(self) -> float:
        phi = 180.0 if self.mode is UavAntennaMode.OMNI else self.phi_b
        return BEAM_GAIN_NUMERATOR / phi**2


def main_lobe_height_window(ant: BsAntenna, h_bs, r):
    """Open interval of UAV heights that see the main lobe at horizontal range ``r``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("horizontal distance must be non-negative")
    lower = h_bs - r * math.tan(math.radians(ant.theta_t + ant.theta_b / 2.0))
    upper = h_bs - r * math.tan(math.radians(ant.theta_t - ant.theta_b / 2.0))
    if np.ndim(lower) == 0 and np.ndim(h_bs) == 0:
        return float(lower), float(upper)
    return lower, upper


def in_main_lobe(ant: BsAntenna, h_bs, r, h_uav):
    # strict on both sides: the boundary belongs to the side lobe
    lower, upper = main_lobe_height_window(ant, h_bs, r)
    return (lower < h_uav) & (h_uav < upper)


def _check_distinct(a: Position3D, b: Position3D):
    if distance_3d(a, b) == 0.0:
        raise ValueError("BS and UAV coincide; link direction is undefined")


def bs_tx_gain(ant: BsAntenna, bs: Position3D, uav: Position3D) -> tuple[float, LobeTag]:
    _check_distinct(bs, uav)
    r = horizontal_distance(bs, uav)
    if in_main_lobe(ant, bs.h, r, uav.h):
        return ant.g_main, LobeTag.MAIN_LOBE
    return ant.g_side, LobeTag.SIDE_LOBE


def in_receive_cone(ant: UavAntenna, h_uav, h_bs, r):
    """Whether the BS lies inside the UAV's downward cone of half-angle phi_b/2."""
    below = np.asarray(h_bs) < np.asarray(h_uav)
    reach = (np.asarray(h_uav) - np.asarray(h_bs)) * math.tan(math.radians(ant.phi_b / 2.0))
    return below & (np.asarray(r) <= reach)


def uav_rx_gain(ant: UavAntenna, uav: Position3D, bs: Position3D) -> float:
    _check_distinct(bs, uav)
    if ant.is_omni:
        return ant.beam_gain
    r = horizontal_distance(bs, uav)
    return ant.beam_gain if bool(in_receive_cone(ant, uav.h, bs.h, r)) else ant.g_back


def uav_rx_gain_array(ant: UavAntenna, h_uav, h_bs, r):
    """Vectorized receive gain over broadcastable geometry arrays."""
    shape = np.broadcast_shapes(np.shape(h_uav), np.shape(h_bs), np.shape(r))
    if ant.is_omni:
        return np.full(shape, ant.beam_gain)
    return np.where(in_receive_cone(ant, h_uav, h_bs, r), ant.beam_gain, ant.g_back)
