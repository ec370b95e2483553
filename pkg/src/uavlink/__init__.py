"""Cellular-network-connected UAV link and flight-energy simulator."""

from .airchannel import (
    ChannelMode,
    EnvParams,
    building_count_m,
    expected_channel_gain,
    los_probability,
    sample_channel_gain,
)
from .antenna import (
    BsAntenna,
    LobeTag,
    UavAntenna,
    UavAntennaMode,
    bs_tx_gain,
    main_lobe_height_window,
    uav_rx_gain,
)
from .flightenergy import (
    EnergyParams,
    FlightConfig,
    ServiceRing,
    cyclic_delay,
    energy_efficiency,
    lap_throughput,
    optimal_speed,
    propulsion_energy,
)
from .geometry import Position3D, RegionSpec, distance_3d, horizontal_distance
from .link import (
    AssociationPolicy,
    BsSite,
    LinkBudget,
    SinrReport,
    UavState,
    associate,
    link_budget,
    noma_pair_rates,
    sinr,
)
from .rng import RngStream
from .runner import (
    SweepParameter,
    SweepResult,
    SweepSpec,
    emit_csv,
    monte_carlo,
    run_case1_height_sweep,
    run_case1_msr_sweep,
    run_case2_speed_sweep,
)
from .scenario import ScenarioConfig, deploy_bs_uniform

__version__ = "0.1.0"
