"""Case-study sweeps, Monte Carlo aggregation and CSV output.

Drop ``k`` of a sweep always draws from ``RngStream(seed, k)``, and every swept
value reuses that drop's BS deployment, so curves are compared on common
random numbers and any evaluation order gives the same table.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .airchannel import ChannelMode, EnvParams
from .flightenergy import (
    DEFAULT_LAP_STEPS,
    EnergyParams,
    FlightConfig,
    ServiceRing,
    cyclic_delay,
    energy_per_lap,
    lap_throughput,
)
from .link import AssociationPolicy, batch_associate, batch_budgets, batch_sinr
from .rng import RngStream
from .scenario import Averaging, ClosestMetric, ScenarioConfig, deploy_xy

CASE1_COLUMNS = ("param", "policy", "mean_sinr_db", "std_sinr_db", "drops")
CASE2_COLUMNS = (
    "speed_mps",
    "node_count",
    "delay_s",
    "energy_j_per_lap",
    "throughput_bits_per_lap",
    "energy_eff_bits_per_j",
)
DEFAULT_DOWNTILTS = (4.0, 8.0)


class SweepParameter(enum.Enum):
    UAV_HEIGHT = "uav_height"
    MSR = "msr"
    SPEED = "speed"
    NODE_COUNT = "node_count"


@dataclass(frozen=True)
class SweepSpec:
    parameter: SweepParameter
    values: tuple[float, ...]
    drops: int = 1000
    policies: tuple[AssociationPolicy, ...] = (AssociationPolicy.CLOSEST, AssociationPolicy.STRONGEST)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "policies", tuple(self.policies))
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.drops < 1:
            raise ValueError("drops must be >= 1")
        if not self.policies:
            raise ValueError("sweep needs at least one association policy")


@dataclass(frozen=True)
class MonteCarloStats:
    mean: np.ndarray | float
    std: np.ndarray | float
    count: int


@dataclass(frozen=True)
class SinrRow:
    param: float
    policy: str
    mean_sinr_db: float
    std_sinr_db: float
    drops: int
    mean_linear: float = math.nan
    std_linear: float = math.nan
    averaging: Averaging = Averaging.LINEAR
    downtilt: float | None = None

    @property
    def label(self) -> str:
        if self.downtilt is None:
            return self.policy
        return f"{self.policy}:theta_t={self.downtilt:g}"

    @property
    def stderr_db(self) -> float:
        """Standard error of ``mean_sinr_db`` in dB."""
        if self.drops < 2:
            return 0.0
        if self.averaging is Averaging.DB:
            return self.std_sinr_db / math.sqrt(self.drops)
        return 10.0 * math.log10(1.0 + self.std_linear / (math.sqrt(self.drops) * self.mean_linear))

    def record(self) -> tuple:
        return (self.param, self.label, self.mean_sinr_db, self.std_sinr_db, self.drops)


@dataclass(frozen=True)
class FlightRow:
    speed_mps: float
    node_count: int
    delay_s: float
    energy_j_per_lap: float
    throughput_bits_per_lap: float
    energy_eff_bits_per_j: float

    def record(self) -> tuple:
        return (
            self.speed_mps,
            self.node_count,
            self.delay_s,
            self.energy_j_per_lap,
            self.throughput_bits_per_lap,
            self.energy_eff_bits_per_j,
        )


@dataclass
class SweepResult:
    columns: tuple[str, ...]
    rows: list = field(default_factory=list)

    def select(self, **match) -> list:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in match.items())]


def _fsum_axis0(a: np.ndarray) -> np.ndarray:
    # exactly rounded, hence independent of drop order
    flat = a.reshape(a.shape[0], -1)
    return np.array([math.fsum(flat[:, j]) for j in range(flat.shape[1])]).reshape(a.shape[1:])


def summarize(samples) -> MonteCarloStats:
    """Mean and sample standard deviation along the drop axis (axis 0)."""
    a = np.asarray(samples, dtype=float)
    n = a.shape[0]
    mean = _fsum_axis0(a) / n
    if n > 1:
        std = np.sqrt(_fsum_axis0((a - mean) ** 2) / (n - 1))
    else:
        std = np.zeros_like(mean)
    if np.ndim(mean) == 0:
        return MonteCarloStats(float(mean), float(std), n)
    return MonteCarloStats(mean, std, n)


def collect_drops(evaluate: Callable[[RngStream], object], drops: int, seed: int) -> np.ndarray:
    """Evaluate drop ``k`` on ``RngStream(seed, k)`` for k = 0..drops-1, stacked by k."""
    if drops < 1:
        raise ValueError("drops must be >= 1")
    return np.asarray([evaluate(RngStream(seed, k)) for k in range(drops)], dtype=float)


def monte_carlo(evaluate: Callable[[RngStream], object], drops: int, seed: int) -> MonteCarloStats:
    return summarize(collect_drops(evaluate, drops, seed))


def _to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def _drop_sinr(cfg: ScenarioConfig, stream: RngStream, heights, antennas, policies) -> np.ndarray:
    """SINR for one deployment, shape (len(antennas), len(heights), len(policies))."""
    gen = stream.generator()
    bs_xy = deploy_xy(cfg, gen)
    uniforms = None
    if cfg.channel_mode is ChannelMode.BERNOULLI:
        uniforms = gen.random((len(heights), len(bs_xy)))
    horizontal = cfg.closest_metric is ClosestMetric.HORIZONTAL
    out = np.empty((len(antennas), len(heights), len(policies)))
    for a, ant in enumerate(antennas):
        bb = batch_budgets(
            bs_xy, cfg.bs_height, cfg.bs_tx_power, ant, cfg.uav_xy, heights,
            cfg.uav_antenna, cfg.env, uniforms,
        )
        for p, policy in enumerate(policies):
            serving = batch_associate(policy, bb, horizontal)
            out[a, :, p] = batch_sinr(bb, serving, cfg.noise_power, cfg.full_reuse)
    return out


def _sinr_rows(cfg, samples, values, policies, downtilts=None) -> list[SinrRow]:
    """Turn samples of shape (drops, variants, values, policies) into table rows."""
    lin = summarize(samples)
    db = summarize(_to_db(samples))
    rows = []
    variants = downtilts if downtilts is not None else [None]
    for t, tilt in enumerate(variants):
        for i, value in enumerate(values):
            for p, policy in enumerate(policies):
                idx = (t, i, p)
                if cfg.averaging is Averaging.LINEAR:
                    mean_db = float(_to_db(lin.mean[idx]))
                else:
                    mean_db = float(db.mean[idx])
                rows.append(
                    SinrRow(
                        param=float(value),
                        policy=policy.value,
                        mean_sinr_db=mean_db,
                        std_sinr_db=float(db.std[idx]),
                        drops=lin.count,
                        mean_linear=float(lin.mean[idx]),
                        std_linear=float(lin.std[idx]),
                        averaging=cfg.averaging,
                        downtilt=tilt,
                    )
                )
    return rows


def run_case1_height_sweep(cfg: ScenarioConfig, sweep: SweepSpec) -> SweepResult:
    """Mean SINR versus UAV height for each association policy."""
    if sweep.parameter is not SweepParameter.UAV_HEIGHT:
        raise ValueError(f"height sweep needs parameter UAV_HEIGHT, got {sweep.parameter}")
    heights = np.asarray(sweep.values, dtype=float)
    if np.any(heights < 0):
        raise ValueError("UAV heights must be non-negative")
    antennas = [cfg.bs_antenna]
    samples = collect_drops(
        lambda s: _drop_sinr(cfg, s, heights, antennas, sweep.policies), sweep.drops, cfg.seed
    )
    return SweepResult(CASE1_COLUMNS, _sinr_rows(cfg, samples, sweep.values, sweep.policies))


def run_case1_msr_sweep(
    cfg: ScenarioConfig,
    sweep: SweepSpec,
    uav_height: float = 100.0,
    downtilts: Sequence[float] | None = None,
) -> SweepResult:
    """Mean SINR versus main-to-side-lobe ratio at a fixed UAV height.

    The main-lobe gain stays fixed and the side-lobe gain is g_main / MSR.
    Each downtilt in ``downtilts`` is a separate column family; by default
    only the configured downtilt is swept.
    """
    if sweep.parameter is not SweepParameter.MSR:
        raise ValueError(f"MSR sweep needs parameter MSR, got {sweep.parameter}")
    if any(m <= 1.0 for m in sweep.values):
        raise ValueError("every MSR must exceed 1 (side lobe weaker than main lobe)")
    tilts = [cfg.bs_antenna.theta_t] if downtilts is None else [float(t) for t in downtilts]
    base = cfg.bs_antenna
    variants = [base.with_downtilt(t).with_msr(m) for t in tilts for m in sweep.values]
    heights = np.array([uav_height], dtype=float)
    nt, nm = len(tilts), len(sweep.values)

    def evaluate(stream):
        s = _drop_sinr(cfg, stream, heights, variants, sweep.policies)
        return s.reshape(nt, nm, len(sweep.policies))

    samples = collect_drops(evaluate, sweep.drops, cfg.seed)
    labels = tilts if downtilts is not None else None
    return SweepResult(CASE1_COLUMNS, _sinr_rows(cfg, samples, sweep.values, sweep.policies, labels))


def association_divergence(cfg: ScenarioConfig, uav_height: float, drops: int) -> float:
    """Fraction of drops where closest and strongest association pick different BSs."""
    heights = np.array([uav_height], dtype=float)
    horizontal = cfg.closest_metric is ClosestMetric.HORIZONTAL

    def evaluate(stream):
        gen = stream.generator()
        bs_xy = deploy_xy(cfg, gen)
        uniforms = None
        if cfg.channel_mode is ChannelMode.BERNOULLI:
            uniforms = gen.random((1, len(bs_xy)))
        bb = batch_budgets(
            bs_xy, cfg.bs_height, cfg.bs_tx_power, cfg.bs_antenna, cfg.uav_xy, heights,
            cfg.uav_antenna, cfg.env, uniforms,
        )
        closest = batch_associate(AssociationPolicy.CLOSEST, bb, horizontal)
        strongest = batch_associate(AssociationPolicy.STRONGEST, bb)
        return float(closest[0] != strongest[0])

    return monte_carlo(evaluate, drops, cfg.seed).mean


def run_case2_speed_sweep(
    ring: ServiceRing,
    cfg: FlightConfig,
    sweep: SweepSpec,
    env: EnvParams | None = None,
    energy: EnergyParams | None = None,
    speeds: Sequence[float] | None = None,
    node_counts: Sequence[int] | None = None,
    steps: int = DEFAULT_LAP_STEPS,
) -> SweepResult:
    """Delay, energy, throughput and energy efficiency over speed and node count.

    With ``parameter=SPEED`` the sweep values are speeds and ``node_counts``
    (default: the ring's own count) is the secondary axis; with
    ``NODE_COUNT`` the roles swap and ``speeds`` defaults to ``cfg.speed``.
    Rings for other node counts keep the ring's equal-angle layout radius.
    """
    env = EnvParams() if env is None else env
    energy = EnergyParams() if energy is None else energy
    if sweep.parameter is SweepParameter.SPEED:
        speed_grid = list(sweep.values)
        count_grid = [ring.node_count] if node_counts is None else list(node_counts)
    elif sweep.parameter is SweepParameter.NODE_COUNT:
        count_grid = [int(v) for v in sweep.values]
        speed_grid = [cfg.speed] if speeds is None else list(speeds)
    else:
        raise ValueError(f"case 2 sweeps need SPEED or NODE_COUNT, got {sweep.parameter}")

    rows = []
    for n in count_grid:
        ring_n = ring if n == ring.node_count else _resized_ring(ring, n)
        for v in speed_grid:
            fc = replace(cfg, speed=float(v))
            bits = lap_throughput(ring_n, fc, env, steps)
            joules = energy_per_lap(fc, energy)
            rows.append(FlightRow(float(v), n, cyclic_delay(ring_n, fc), joules, bits, bits / joules))
    rows.sort(key=lambda r: (r.speed_mps, r.node_count))
    return SweepResult(CASE2_COLUMNS, rows)


def _resized_ring(ring: ServiceRing, n: int) -> ServiceRing:
    radii = {round(math.hypot(p.x, p.y), 9) for p in ring.node_positions}
    rho = radii.pop() if len(radii) == 1 else ring.area_radius / 2.0
    return ServiceRing.equal_angle(n, ring.area_radius, rho)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(columns: Sequence[str], records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(v) for v in rec])


def emit_csv(result: SweepResult, path) -> None:
    """Write the table; floats use the shortest repr that round-trips exactly."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            write_csv(result.columns, (r.record() for r in result.rows), fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
