"""Ground-to-UAV large-scale channel.

The channel power gain is a mixture of a LOS and an NLOS power law, weighted
by a building-blockage LOS probability that depends on both antenna heights
and the horizontal separation.  All functions broadcast over numpy arrays;
scalar inputs give Python floats back.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .rng import as_generator
from .units import db_to_linear


class ChannelMode(enum.Enum):
    EXPECTED = "expected"
    BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class EnvParams:
    """Environment triple plus LOS/NLOS path-loss constants.

    ``a`` is the built-up area ratio, ``b`` the building density per km^2 and
    ``c`` the building-height scale in meters.  ``g_los`` and ``g_nlos`` are
    linear gains at the reference distance ``d0``.
    """

    a: float = 0.3
    b: float = 500.0
    c: float = 15.0
    g_los: float = db_to_linear(-32.9)
    g_nlos: float = db_to_linear(-41.1)
    alpha_los: float = 2.09
    alpha_nlos: float = 3.75
    d0: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"a must lie in (0, 1], got {self.a}")
        if self.b <= 0.0 or self.c <= 0.0:
            raise ValueError("b and c must be positive")
        if not 0.0 < self.g_nlos < self.g_los < 1.0:
            raise ValueError(
                f"need 0 < g_nlos < g_los < 1, got g_nlos={self.g_nlos}, g_los={self.g_los}"
            )
        if not 2.0 <= self.alpha_los <= self.alpha_nlos:
            raise ValueError("need 2 <= alpha_los <= alpha_nlos")
        if self.d0 <= 0.0:
            raise ValueError("d0 must be positive")

    @classmethod
    def from_db(cls, g_los_db: float, g_nlos_db: float, **kw) -> "EnvParams":
        return cls(g_los=db_to_linear(g_los_db), g_nlos=db_to_linear(g_nlos_db), **kw)


def _out(value, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return value.item() if isinstance(value, np.ndarray) else value
    return value


def building_count_m(r, env: EnvParams):
    """Index of the last building row crossed over horizontal distance ``r``.

    May be negative for short spans (no rows crossed).
    """
    r = np.asarray(r, dtype=float)
    m = np.floor(r * math.sqrt(env.a * env.b) / 1000.0 - 1.0).astype(np.int64)
    return _out(m, r)


def los_probability(h_bs, h_uav, r, env: EnvParams):
    """Probability that no building row blocks the BS-UAV ray.

    The ray is sampled at the middle of each of the ``m + 1`` crossed rows and
    the ray height there is compared with a Rayleigh building height of scale
    ``c``.  ``m < 0`` is an empty product, i.e. probability one.
    """
    h_bs_a, h_uav_a, r_a = np.broadcast_arrays(
        np.asarray(h_bs, dtype=float), np.asarray(h_uav, dtype=float), np.asarray(r, dtype=float)
    )
    if np.any(r_a < 0) or np.any(h_bs_a < 0) or np.any(h_uav_a < 0):
        raise ValueError("heights and horizontal distance must be non-negative")
    m = np.asarray(building_count_m(r_a, env))
    p = np.ones(r_a.shape)
    two_c2 = 2.0 * env.c * env.c
    rows = int(m.max()) + 1 if m.size else 0
    for n in range(rows):
        active = n <= m
        span = np.where(active, m + 1, 1)
        ray_h = h_bs_a - (n + 0.5) * (h_bs_a - h_uav_a) / span
        factor = 1.0 - np.exp(-(ray_h**2) / two_c2)
        p = np.where(active, p * factor, p)
    return _out(p, h_bs, h_uav, r)


def los_gain(d, env: EnvParams):
    return env.g_los * np.power(d, -env.alpha_los)


def nlos_gain(d, env: EnvParams):
    return env.g_nlos * np.power(d, -env.alpha_nlos)


def _check_distance(d, env):
    if np.any(np.asarray(d) < env.d0):
        raise ValueError(f"distance below the reference distance d0={env.d0} m")


def expected_channel_gain(d, p_los, env: EnvParams):
    """LOS/NLOS mixture gain weighted by ``p_los``."""
    _check_distance(d, env)
    d_a = np.asarray(d, dtype=float)
    p = np.asarray(p_los, dtype=float)
    g = p * los_gain(d_a, env) + (1.0 - p) * nlos_gain(d_a, env)
    return _out(g, d, p_los)


def sample_channel_gain(d, p_los, env: EnvParams, rng):
    """One Bernoulli realization of the mixture: LOS with probability ``p_los``."""
    _check_distance(d, env)
    d_a = np.asarray(d, dtype=float)
    p = np.asarray(p_los, dtype=float)
    shape = np.broadcast_shapes(d_a.shape, p.shape)
    u = as_generator(rng).random(shape)
    g = np.where(u < p, los_gain(d_a, env), nlos_gain(d_a, env))
    return _out(g, d, p_los)


def realized_channel_gain(d, p_los, env: EnvParams, uniforms):
    """Bernoulli realization driven by pre-drawn uniforms (common random numbers)."""
    _check_distance(d, env)
    return np.where(np.asarray(uniforms) < p_los, los_gain(d, env), nlos_gain(d, env))
