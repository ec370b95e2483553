"""Link budgets, association, SINR decomposition and a two-user NOMA rate kernel.

The scalar functions work on one BS/UAV pair at a time and mirror the model
term by term.  :func:`batch_budgets` evaluates the same model for every
(UAV height, BS) pair of a drop at once and is what the sweeps use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .airchannel import (
    ChannelMode,
    EnvParams,
    expected_channel_gain,
    los_probability,
    realized_channel_gain,
    sample_channel_gain,
)
from .antenna import (
    BsAntenna,
    LobeTag,
    UavAntenna,
    bs_tx_gain,
    in_main_lobe,
    uav_rx_gain,
    uav_rx_gain_array,
)
from .geometry import Position3D, distance_3d, horizontal_distance


class AssociationPolicy(enum.Enum):
    CLOSEST = "closest"
    STRONGEST = "strongest"


@dataclass(frozen=True)
class BsSite:
    position: Position3D
    tx_power: float
    antenna: BsAntenna


@dataclass(frozen=True)
class UavState:
    position: Position3D
    antenna: UavAntenna


@dataclass(frozen=True)
class LinkBudget:
    bs_index: int
    rx_power: float
    lobe: LobeTag
    p_los: float
    distance: float
    horizontal: float = math.nan


@dataclass(frozen=True)
class SinrReport:
    serving_index: int
    sinr: float
    signal: float
    interference_main: float
    interference_side: float
    noise: float

    @property
    def interference(self) -> float:
        return self.interference_main + self.interference_side

    @property
    def sinr_db(self) -> float:
        return 10.0 * math.log10(self.sinr) if self.sinr > 0 else -math.inf


def link_budget(
    bs: BsSite,
    uav: UavState,
    env: EnvParams,
    mode: ChannelMode = ChannelMode.EXPECTED,
    rng=None,
    bs_index: int = 0,
) -> LinkBudget:
    """Received power p_t * g_t * g_r * g_c for one BS-UAV link."""
    g_t, lobe = bs_tx_gain(bs.antenna, bs.position, uav.position)
    g_r = uav_rx_gain(uav.antenna, uav.position, bs.position)
    r = horizontal_distance(bs.position, uav.position)
    d = distance_3d(bs.position, uav.position)
    p_los = los_probability(bs.position.h, uav.position.h, r, env)
    if mode is ChannelMode.EXPECTED:
        g_c = expected_channel_gain(d, p_los, env)
    else:
        if rng is None:
            raise ValueError("Bernoulli channel mode needs an rng")
        g_c = sample_channel_gain(d, p_los, env, rng)
    return LinkBudget(bs_index, bs.tx_power * g_t * g_r * g_c, lobe, p_los, d, r)


def associate(
    policy: AssociationPolicy,
    budgets: list[LinkBudget],
    distances: list[float] | None = None,
) -> int:
    """Index of the serving BS; ties go to the lowest index.

    ``distances`` defaults to each budget's 3D distance; pass horizontal
    distances to get the horizontal variant of closest association.
    """
    if not budgets:
        raise ValueError("cannot associate with an empty BS list")
    if policy is AssociationPolicy.CLOSEST:
        dist = [b.distance for b in budgets] if distances is None else list(distances)
        if len(dist) != len(budgets):
            raise ValueError("distances and budgets differ in length")
        return min(range(len(dist)), key=lambda i: (dist[i], i))
    return min(range(len(budgets)), key=lambda i: (-budgets[i].rx_power, i))


def sinr(budgets: list[LinkBudget], serving: int, noise: float) -> SinrReport:
    if not 0 <= serving < len(budgets):
        raise IndexError(f"serving index {serving} out of range for {len(budgets)} budgets")
    if noise <= 0.0:
        raise ValueError("noise power must be positive")
    main = math.fsum(
        b.rx_power for i, b in enumerate(budgets) if i != serving and b.lobe is LobeTag.MAIN_LOBE
    )
    side = math.fsum(
        b.rx_power for i, b in enumerate(budgets) if i != serving and b.lobe is LobeTag.SIDE_LOBE
    )
    signal = budgets[serving].rx_power
    return SinrReport(serving, signal / (main + side + noise), signal, main, side, noise)


def noma_pair_rates(gamma_strong: float, gamma_weak: float, p_total: float, beta_weak: float):
    """Downlink two-user NOMA rates in bit/s/Hz with SIC at the strong user.

    ``gamma_*`` are channel-gain-to-noise ratios per watt and ``beta_weak`` is
    the share of ``p_total`` given to the weak user.  Returns
    ``(rate_strong, rate_weak)``.
    """
    if not gamma_strong >= gamma_weak > 0.0:
        raise ValueError("need gamma_strong >= gamma_weak > 0; sort the pair first")
    if not 0.0 <= beta_weak <= 1.0:
        raise ValueError(f"beta_weak must lie in [0, 1], got {beta_weak}")
    if p_total < 0.0:
        raise ValueError("p_total must be non-negative")
    p_strong = (1.0 - beta_weak) * p_total
    p_weak = beta_weak * p_total
    rate_strong = math.log2(1.0 + p_strong * gamma_strong)
    rate_weak = math.log2(1.0 + p_weak * gamma_weak / (p_strong * gamma_weak + 1.0))
    return rate_strong, rate_weak


@dataclass
class BatchBudgets:
    """Per-drop link quantities, each of shape (heights, bs)."""

    rx_power: np.ndarray
    main_lobe: np.ndarray
    distance: np.ndarray
    horizontal: np.ndarray
    p_los: np.ndarray


def batch_budgets(
    bs_xy: np.ndarray,
    bs_height: float,
    tx_power: float,
    bs_ant: BsAntenna,
    uav_xy: tuple[float, float],
    uav_heights,
    uav_ant: UavAntenna,
    env: EnvParams,
    los_uniforms: np.ndarray | None = None,
) -> BatchBudgets:
    """Received powers from every BS at every UAV height.

    With ``los_uniforms`` (same shape as the output) each link is realized as
    LOS when its uniform is below the LOS probability; otherwise the expected
    mixture gain is used.
    """
    bs_xy = np.asarray(bs_xy, dtype=float).reshape(-1, 2)
    h = np.asarray(uav_heights, dtype=float).reshape(-1, 1)
    r = np.hypot(bs_xy[:, 0] - uav_xy[0], bs_xy[:, 1] - uav_xy[1]).reshape(1, -1)
    r, h = np.broadcast_arrays(r, h)
    d = np.sqrt(r**2 + (h - bs_height) ** 2)
    if np.any(d == 0.0):
        raise ValueError("a BS coincides with the UAV; link direction is undefined")
    p_los = los_probability(bs_height, h, r, env)
    if los_uniforms is None:
        g_c = expected_channel_gain(d, p_los, env)
    else:
        g_c = realized_channel_gain(d, p_los, env, los_uniforms)
    main = in_main_lobe(bs_ant, bs_height, r, h)
    g_t = np.where(main, bs_ant.g_main, bs_ant.g_side)
    g_r = uav_rx_gain_array(uav_ant, h, bs_height, r)
    return BatchBudgets(tx_power * g_t * g_r * g_c, main, d, r, p_los)


def batch_associate(policy: AssociationPolicy, bb: BatchBudgets, horizontal: bool = False) -> np.ndarray:
    """Serving BS index per height row; ``np.argmin``/``argmax`` pick the lowest index on ties."""
    if policy is AssociationPolicy.CLOSEST:
        return np.argmin(bb.horizontal if horizontal else bb.distance, axis=1)
    return np.argmax(bb.rx_power, axis=1)


def batch_sinr(bb: BatchBudgets, serving: np.ndarray, noise: float, full_reuse: bool = True) -> np.ndarray:
    rows = np.arange(bb.rx_power.shape[0])
    signal = bb.rx_power[rows, serving]
    if not full_reuse:
        return signal / noise
    others = np.ones(bb.rx_power.shape, dtype=bool)
    others[rows, serving] = False
    interference = np.where(others, bb.rx_power, 0.0).sum(axis=1)
    return signal / (interference + noise)
