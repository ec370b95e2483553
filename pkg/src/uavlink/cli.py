"""Command-line entry point: ``uavlink <subcommand> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import enum
import io
import logging
import sys
from pathlib import Path

import numpy as np

from .config import Config, ConfigError, load_config
from .geometry import Position3D
from .link import AssociationPolicy, BsSite, UavState, associate, link_budget, sinr
from .rng import RngStream
from .runner import (
    SweepParameter,
    SweepSpec,
    run_case1_height_sweep,
    run_case1_msr_sweep,
    run_case2_speed_sweep,
    write_csv,
)
from .scenario import deploy_xy
from .units import watts_to_dbm

log = logging.getLogger("uavlink")

LINK_COLUMNS = (
    "bs_index", "x_m", "y_m", "horizontal_m", "distance_m", "p_los", "lobe",
    "rx_power_w", "rx_power_dbm", "sinr_db", "serving_closest", "serving_strongest",
)


def _load(args) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    scen = cfg.scenario
    if args.seed is not None:
        scen = dataclasses.replace(scen, seed=args.seed)
    case1 = cfg.case1
    if args.drops is not None:
        case1 = dataclasses.replace(case1, drops=args.drops)
    if args.policy is not None:
        pol = (
            (AssociationPolicy.CLOSEST, AssociationPolicy.STRONGEST)
            if args.policy == "both"
            else (AssociationPolicy(args.policy),)
        )
        case1 = dataclasses.replace(case1, policies=pol)
    return dataclasses.replace(cfg, scenario=scen, case1=case1)


def _emit(columns, records, out):
    if out is None or out == "-":
        write_csv(columns, records, sys.stdout)
        return
    buf = io.StringIO()
    write_csv(columns, records, buf)
    path = Path(out)
    try:
        path.write_text(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
    log.info("wrote %s", path)


def cmd_case1_height(cfg: Config, args):
    sweep = SweepSpec(SweepParameter.UAV_HEIGHT, cfg.case1.heights, cfg.case1.drops, cfg.case1.policies)
    res = run_case1_height_sweep(cfg.scenario, sweep)
    _emit(res.columns, [r.record() for r in res.rows], args.out)


def cmd_case1_msr(cfg: Config, args):
    sweep = SweepSpec(SweepParameter.MSR, cfg.case1.msr_values, cfg.case1.drops, cfg.case1.policies)
    res = run_case1_msr_sweep(
        cfg.scenario, sweep, uav_height=cfg.case1.msr_uav_height, downtilts=cfg.case1.downtilts
    )
    _emit(res.columns, [r.record() for r in res.rows], args.out)


def cmd_case2_speed(cfg: Config, args):
    c2 = cfg.case2
    sweep = SweepSpec(SweepParameter.SPEED, c2.speeds, 1, (AssociationPolicy.CLOSEST,))
    res = run_case2_speed_sweep(
        c2.ring, c2.flight, sweep, cfg.scenario.env, c2.energy,
        node_counts=c2.node_counts, steps=c2.lap_steps,
    )
    _emit(res.columns, [r.record() for r in res.rows], args.out)


def cmd_link_budget(cfg: Config, args):
    """Per-BS budget table for drop 0 of the configured seed."""
    scen = cfg.scenario
    height = args.height if args.height is not None else cfg.case1.link_uav_height
    gen = RngStream(scen.seed, 0).generator()
    bs_xy = deploy_xy(scen, gen)
    uav = UavState(scen.uav_position(height), scen.uav_antenna)
    budgets = [
        link_budget(
            BsSite(Position3D(float(x), float(y), scen.bs_height), scen.bs_tx_power, scen.bs_antenna),
            uav, scen.env, scen.channel_mode, gen, bs_index=i,
        )
        for i, (x, y) in enumerate(bs_xy)
    ]
    horiz = [b.horizontal for b in budgets] if scen.closest_metric.value == "horizontal" else None
    closest = associate(AssociationPolicy.CLOSEST, budgets, horiz)
    strongest = associate(AssociationPolicy.STRONGEST, budgets)
    records = []
    for i, b in enumerate(budgets):
        rep = sinr(budgets, i, scen.noise_power)
        records.append((
            i, float(bs_xy[i, 0]), float(bs_xy[i, 1]), b.horizontal, b.distance, b.p_los,
            b.lobe.value, b.rx_power, watts_to_dbm(b.rx_power), rep.sinr_db,
            int(i == closest), int(i == strongest),
        ))
    _emit(LINK_COLUMNS, records, args.out)


def _plain(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out.append((prefix, obj))


def cmd_validate_config(cfg: Config, args):
    """Print the fully resolved configuration (linear SI units) as key,value CSV."""
    pairs: list = []
    _flatten("", _plain(cfg), pairs)
    _emit(("key", "value"), [(k, str(v)) for k, v in pairs], args.out)


COMMANDS = {
    "case1-height": (cmd_case1_height, "mean SINR versus UAV height"),
    "case1-msr": (cmd_case1_msr, "mean SINR versus main-to-side-lobe ratio"),
    "case2-speed": (cmd_case2_speed, "delay and energy efficiency versus speed"),
    "link-budget": (cmd_link_budget, "per-BS link budget diagnostic for one drop"),
    "validate-config": (cmd_validate_config, "check a config file and print resolved values"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavlink", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML config file (defaults to the reference scenario)")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--drops", type=int, help="Monte Carlo drops per value (overrides config)")
        p.add_argument("--policy", choices=["closest", "strongest", "both"])
        p.add_argument("--format", choices=["csv"], default="csv")
        if name == "link-budget":
            p.add_argument("--height", type=float, help="UAV height in meters")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        parser.error("--seed must be a 64-bit unsigned integer")
    if args.drops is not None and args.drops < 1:
        parser.error("--drops must be >= 1")
    try:
        cfg = _load(args)
        COMMANDS[args.command][0](cfg, args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"uavlink: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
