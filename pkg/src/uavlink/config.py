"""YAML configuration ingestion.

Every section is optional and defaults to the reference scenario.  Unknown
keys are errors.  Quantities that have a logarithmic form accept exactly one
of the linear key or its ``_db``/``_dbm``/``_dbw`` suffixed variant, e.g.
``bs_tx_power`` (W) or ``bs_tx_power_dbw``.

A range may be written as a list or as ``{start, stop, step}`` (inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .airchannel import ChannelMode, EnvParams
from .antenna import BsAntenna, UavAntenna, UavAntennaMode
from .flightenergy import DEFAULT_LAP_STEPS, EnergyParams, FlightConfig, ServiceRing
from .geometry import RegionSpec
from .link import AssociationPolicy
from .rng import RngStream
from .runner import DEFAULT_DOWNTILTS
from .scenario import Averaging, BsLayout, ClosestMetric, ScenarioConfig
from .units import db_to_linear, dbm_to_watts, dbw_to_watts


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Case1Settings:
    heights: tuple[float, ...] = tuple(float(h) for h in range(25, 501, 25))
    msr_values: tuple[float, ...] = (5.0, 10.0, 20.0, 40.0)
    msr_uav_height: float = 100.0
    downtilts: tuple[float, ...] = DEFAULT_DOWNTILTS
    drops: int = 1000
    policies: tuple[AssociationPolicy, ...] = (AssociationPolicy.CLOSEST, AssociationPolicy.STRONGEST)
    link_uav_height: float = 100.0


@dataclass(frozen=True)
class Case2Settings:
    flight: FlightConfig = field(default_factory=FlightConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    ring: ServiceRing = field(default_factory=lambda: ServiceRing.equal_angle(10, 1000.0))
    speeds: tuple[float, ...] = tuple(float(v) for v in range(5, 61, 5))
    node_counts: tuple[int, ...] = (5, 10)
    lap_steps: int = DEFAULT_LAP_STEPS


@dataclass(frozen=True)
class Config:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    case1: Case1Settings = field(default_factory=Case1Settings)
    case2: Case2Settings = field(default_factory=Case2Settings)


_LOG_SUFFIX = {"_db": db_to_linear, "_dbm": dbm_to_watts, "_dbw": dbw_to_watts}


class _Section:
    """Consumes keys of one mapping and reports leftovers as unknown."""

    def __init__(self, data: Any, name: str):
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError(f"section '{name}' must be a mapping")
        self.data = dict(data)
        self.name = name

    def _key(self, key):
        return f"{self.name}.{key}"

    def take(self, key, default=None):
        return self.data.pop(key, default)

    def number(self, key, default=None):
        v = self.take(key)
        return default if v is None else _as_float(v, self._key(key))

    def integer(self, key, default=None):
        v = self.take(key)
        if v is None:
            return default
        f = _as_float(v, self._key(key))
        if f != int(f):
            raise ConfigError(f"{self._key(key)} must be an integer, got {v!r}")
        return int(f)

    def quantity(self, key, suffixes, default=None):
        """Linear value from ``key`` or one of its log-unit suffixed variants."""
        found = [(key, None)] if key in self.data else []
        found += [(key + s, _LOG_SUFFIX[s]) for s in suffixes if key + s in self.data]
        if len(found) > 1:
            raise ConfigError(f"{self.name}: give only one of {', '.join(k for k, _ in found)}")
        if not found:
            return default
        k, conv = found[0]
        v = _as_float(self.data.pop(k), self._key(k))
        return v if conv is None else conv(v)

    def choice(self, key, enum_cls, default):
        v = self.take(key)
        if v is None:
            return default
        try:
            return enum_cls(str(v).lower())
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls)
            raise ConfigError(f"{self._key(key)}: {v!r} is not one of {allowed}") from None

    def sub(self, key) -> "_Section":
        return _Section(self.take(key), self._key(key))

    def finish(self):
        if self.data:
            raise ConfigError(f"unknown key(s) in '{self.name}': {', '.join(sorted(map(str, self.data)))}")


def _as_float(v, where) -> float:
    if isinstance(v, bool):
        raise ConfigError(f"{where} must be a number, got {v!r}")
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} must be a number, got {v!r}") from None


def _flag(v, where) -> bool:
    if not isinstance(v, bool):
        raise ConfigError(f"{where} must be true or false, got {v!r}")
    return v


def _grid(v, where) -> tuple[float, ...] | None:
    if v is None:
        return None
    if isinstance(v, dict):
        extra = set(v) - {"start", "stop", "step"}
        if extra or len(v) != 3:
            raise ConfigError(f"{where}: a range needs exactly start, stop, step")
        start, stop, step = (_as_float(v[k], where) for k in ("start", "stop", "step"))
        if step <= 0:
            raise ConfigError(f"{where}: step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(start + i * step) for i in range(count))
    if isinstance(v, (list, tuple)):
        return tuple(_as_float(x, where) for x in v)
    return (_as_float(v, where),)


def _policies(v, where):
    if v is None:
        return None
    items = [v] if isinstance(v, str) else list(v)
    out = []
    for item in items:
        s = str(item).lower()
        if s == "both":
            out += [AssociationPolicy.CLOSEST, AssociationPolicy.STRONGEST]
            continue
        try:
            out.append(AssociationPolicy(s))
        except ValueError:
            raise ConfigError(f"{where}: unknown policy {item!r}") from None
    return tuple(dict.fromkeys(out))


def _wrap(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _env(sec: _Section) -> EnvParams:
    d = EnvParams()
    env = _wrap(
        EnvParams,
        a=sec.number("a", d.a),
        b=sec.number("b", d.b),
        c=sec.number("c", d.c),
        g_los=sec.quantity("g_los", ["_db"], d.g_los),
        g_nlos=sec.quantity("g_nlos", ["_db"], d.g_nlos),
        alpha_los=sec.number("alpha_los", d.alpha_los),
        alpha_nlos=sec.number("alpha_nlos", d.alpha_nlos),
        d0=sec.number("d0", d.d0),
    )
    sec.finish()
    return env


def _bs_antenna(sec: _Section) -> BsAntenna:
    d = BsAntenna()
    g_main = sec.quantity("g_main", ["_db"], d.g_main)
    g_side = sec.quantity("g_side", ["_db"])
    msr = sec.quantity("msr", ["_db"])
    if g_side is not None and msr is not None:
        raise ConfigError("bs_antenna: give g_side or msr, not both")
    if msr is not None:
        if msr <= 1.0:
            raise ConfigError(f"bs_antenna.msr must exceed 1, got {msr}")
        g_side = g_main / msr
    ant = _wrap(
        BsAntenna,
        theta_b=sec.number("theta_b", d.theta_b),
        theta_t=sec.number("theta_t", d.theta_t),
        g_main=g_main,
        g_side=d.g_side if g_side is None else g_side,
    )
    sec.finish()
    return ant


def _uav_antenna(sec: _Section) -> UavAntenna:
    d = UavAntenna()
    ant = _wrap(
        UavAntenna,
        mode=sec.choice("mode", UavAntennaMode, d.mode),
        phi_b=sec.number("phi_b", d.phi_b),
        g_back=sec.quantity("g_back", ["_db"], d.g_back),
    )
    sec.finish()
    return ant


def _xy_pair(v, where):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ConfigError(f"{where} must be an [x, y] pair")
    return (_as_float(v[0], where), _as_float(v[1], where))


def _scenario(sec: _Section, env, bs_ant, uav_ant) -> ScenarioConfig:
    d = ScenarioConfig()
    reg = sec.sub("region")
    region = _wrap(RegionSpec, reg.number("width", d.region.width), reg.number("depth", d.region.depth))
    reg.finish()
    uav_xy = sec.take("uav_xy")
    bs_xy = sec.take("bs_xy")
    noise = sec.quantity("noise_power", ["_dbm", "_dbw"])
    cfg = _wrap(
        ScenarioConfig,
        region=region,
        bs_count=sec.integer("bs_count", d.bs_count),
        bs_height=sec.number("bs_height", d.bs_height),
        bs_tx_power=sec.quantity("bs_tx_power", ["_dbm", "_dbw"], d.bs_tx_power),
        env=env,
        bs_antenna=bs_ant,
        uav_antenna=uav_ant,
        uav_xy=None if uav_xy is None else _xy_pair(uav_xy, "scenario.uav_xy"),
        noise_power=d.noise_power if noise is None else noise,
        seed=sec.integer("seed", d.seed),
        channel_mode=sec.choice("channel_mode", ChannelMode, d.channel_mode),
        layout=sec.choice("layout", BsLayout, d.layout),
        bs_xy=() if bs_xy is None else tuple(_xy_pair(p, "scenario.bs_xy") for p in bs_xy),
        closest_metric=sec.choice("closest_metric", ClosestMetric, d.closest_metric),
        full_reuse=_flag(sec.take("full_reuse", d.full_reuse), "scenario.full_reuse"),
        averaging=sec.choice("averaging", Averaging, d.averaging),
    )
    sec.finish()
    return cfg


def _case1(sec: _Section) -> Case1Settings:
    d = Case1Settings()
    heights = _grid(sec.take("heights"), "case1.heights")
    msr = _grid(sec.take("msr_values"), "case1.msr_values")
    tilts = _grid(sec.take("downtilts"), "case1.downtilts")
    pol = _policies(sec.take("policies"), "case1.policies")
    out = Case1Settings(
        heights=d.heights if heights is None else heights,
        msr_values=d.msr_values if msr is None else msr,
        msr_uav_height=sec.number("msr_uav_height", d.msr_uav_height),
        downtilts=d.downtilts if tilts is None else tilts,
        drops=sec.integer("drops", d.drops),
        policies=d.policies if pol is None else pol,
        link_uav_height=sec.number("link_uav_height", d.link_uav_height),
    )
    sec.finish()
    if out.drops < 1:
        raise ConfigError("case1.drops must be >= 1")
    return out


def _case2(sec: _Section, env_seed: int) -> Case2Settings:
    d = Case2Settings()
    fl = sec.sub("flight")
    df = d.flight
    flight = _wrap(
        FlightConfig,
        radius=fl.number("radius", df.radius),
        speed=fl.number("speed", df.speed),
        duration=fl.number("duration", df.duration),
        uav_height=fl.number("uav_height", df.uav_height),
        uav_tx_power=fl.quantity("uav_tx_power", ["_dbm", "_dbw"], df.uav_tx_power),
        bandwidth=fl.number("bandwidth", df.bandwidth),
        noise_density=fl.quantity("noise_density", ["_dbm", "_dbw"], df.noise_density),
    )
    fl.finish()
    en = sec.sub("energy")
    de = d.energy
    energy = _wrap(
        EnergyParams,
        c1=en.number("c1", de.c1),
        c2=en.number("c2", de.c2),
        gravity=en.number("gravity", de.gravity),
    )
    en.finish()
    rs = sec.sub("ring")
    n = rs.integer("node_count", d.ring.node_count)
    area = rs.number("area_radius", d.ring.area_radius)
    placement = str(rs.take("placement", "ring")).lower()
    ring_radius = rs.number("ring_radius")
    rs.finish()
    if placement == "ring":
        ring = _wrap(ServiceRing.equal_angle, n, area, ring_radius)
    elif placement == "uniform":
        ring = _wrap(ServiceRing.uniform_disc, n, area, RngStream(env_seed, 0))
    else:
        raise ConfigError(f"case2.ring.placement: {placement!r} is not one of ring, uniform")
    speeds = _grid(sec.take("speeds"), "case2.speeds")
    counts = _grid(sec.take("node_counts"), "case2.node_counts")
    out = Case2Settings(
        flight=flight,
        energy=energy,
        ring=ring,
        speeds=d.speeds if speeds is None else speeds,
        node_counts=d.node_counts if counts is None else tuple(int(c) for c in counts),
        lap_steps=sec.integer("lap_steps", d.lap_steps),
    )
    sec.finish()
    return out


def parse_config(data: Any) -> Config:
    root = _Section(data, "<root>")
    env = _env(root.sub("env"))
    bs_ant = _bs_antenna(root.sub("bs_antenna"))
    uav_ant = _uav_antenna(root.sub("uav_antenna"))
    scenario = _scenario(root.sub("scenario"), env, bs_ant, uav_ant)
    case1 = _case1(root.sub("case1"))
    case2 = _case2(root.sub("case2"), scenario.seed)
    root.finish()
    return Config(scenario, case1, case2)


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return parse_config(data)
