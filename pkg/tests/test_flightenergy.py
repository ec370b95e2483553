import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import golden_section_min
from uavlink.airchannel import EnvParams, expected_channel_gain, los_probability
from uavlink.flightenergy import (
    EnergyParams,
    FlightConfig,
    ServiceRing,
    cyclic_delay,
    efficiency_optimal_speed,
    energy_efficiency,
    lap_throughput,
    optimal_speed,
    propulsion_energy,
    propulsion_power,
)
from uavlink.geometry import Position3D

EP = EnergyParams()
ENV = EnvParams()
RING10 = ServiceRing.equal_angle(10, 1000.0)


def eq3(T, V, r, c1=9.26e-4, c2=2250.0, g=9.8):
    return T * ((c1 + c2 / (g**2 * r**2)) * V**3 + c2 / V)


def test_energy_example():
    assert propulsion_energy(FlightConfig(duration=1.0, speed=30.0, radius=1000.0), EP) == pytest.approx(
        100.634548937943, abs=1e-9
    )


def test_energy_linear_in_duration():
    e1 = propulsion_energy(FlightConfig(duration=3.0), EP)
    e2 = propulsion_energy(FlightConfig(duration=6.0), EP)
    assert e2 == pytest.approx(2 * e1, rel=1e-15)


def test_energy_large_radius_limit():
    cfg = FlightConfig(radius=1e9, speed=20.0)
    assert propulsion_energy(cfg, EP) == pytest.approx(EP.c1 * 20.0**3 + EP.c2 / 20.0, rel=1e-12)


def test_energy_matches_independent_formula_on_random_tuples():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        T, V, r = rng.uniform(0.1, 1e3), rng.uniform(0.5, 200), rng.uniform(10, 1e4)
        c1, c2, g = rng.uniform(1e-5, 1e-2), rng.uniform(10, 1e4), rng.uniform(1, 20)
        got = propulsion_energy(FlightConfig(radius=r, speed=V, duration=T), EnergyParams(c1, c2, g))
        assert abs(got - eq3(T, V, r, c1, c2, g)) <= 1e-12 * abs(got)


def test_energy_rejects_non_positive_speed():
    with pytest.raises(ValueError):
        FlightConfig(speed=0.0)
    with pytest.raises(ValueError):
        propulsion_power(-1.0, 1000.0, EP)


def test_energy_derivative_single_sign_change():
    v = np.logspace(-2, 4, 4000)
    dp = np.gradient(propulsion_power(v, 1000.0, EP), v)
    signs = np.sign(dp)
    assert signs[0] < 0 and signs[-1] > 0
    assert np.count_nonzero(np.diff(signs)) == 1


def test_optimal_speed_examples():
    v_star = optimal_speed(1000.0, EP)
    assert v_star == pytest.approx(29.8125988837317, abs=1e-9)
    oracle = golden_section_min(lambda v: eq3(1.0, v, 1000.0), 1.0, 200.0)
    assert v_star == pytest.approx(oracle, abs=1e-6)
    assert optimal_speed(1e12, EP) == pytest.approx((EP.c2 / (3 * EP.c1)) ** 0.25, rel=1e-12)
    assert optimal_speed(1e12, EP) == pytest.approx(30.0, abs=0.01)
    e = lambda v: propulsion_energy(FlightConfig(speed=v), EP)
    assert e(v_star) <= e(v_star - 1) and e(v_star) <= e(v_star + 1)


def test_delay_examples():
    assert cyclic_delay(ServiceRing.equal_angle(1), FlightConfig()) == 0.0
    assert cyclic_delay(RING10, FlightConfig(speed=30.0)) == pytest.approx(188.495559215388, rel=1e-12)
    slow = cyclic_delay(RING10, FlightConfig(speed=20.0))
    fast = cyclic_delay(RING10, FlightConfig(speed=40.0))
    assert fast == pytest.approx(slow / 2, rel=1e-15)


@given(st.integers(2, 500), st.floats(0.1, 300), st.floats(1, 1e5))
def test_delay_identity(n, v, radius):
    d = cyclic_delay(ServiceRing.equal_angle(n, radius), FlightConfig(radius=radius, speed=v))
    assert d * n / (n - 1) * v / (2 * math.pi * radius) == pytest.approx(1.0, rel=1e-12)


def test_throughput_zero_power():
    assert lap_throughput(RING10, FlightConfig(uav_tx_power=0.0), ENV) == 0.0


def test_throughput_single_center_node_closed_form():
    ring = ServiceRing(1, (Position3D(0.0, 0.0, 0.0),), 1000.0)
    cfg = FlightConfig(radius=800.0, speed=25.0, uav_height=100.0)
    d = math.hypot(800.0, 100.0)
    p_los = los_probability(0.0, 100.0, 800.0, ENV)
    snr = cfg.uav_tx_power * expected_channel_gain(d, p_los, ENV) / (cfg.noise_density * cfg.bandwidth)
    expected = cfg.lap_time * cfg.bandwidth * math.log2(1 + snr)
    assert lap_throughput(ring, cfg, ENV, steps=997) == pytest.approx(expected, rel=1e-12)


def test_throughput_increases_when_noise_halves():
    cfg = FlightConfig()
    quieter = cfg.replace(noise_density=cfg.noise_density / 2)
    assert lap_throughput(RING10, quieter, ENV) > lap_throughput(RING10, cfg, ENV)


def test_throughput_converged_in_steps():
    cfg = FlightConfig()
    a = lap_throughput(RING10, cfg, ENV, steps=3600)
    b = lap_throughput(RING10, cfg, ENV, steps=7200)
    assert abs(b - a) / a < 1e-3


def test_throughput_rejects_too_few_steps():
    with pytest.raises(ValueError):
        lap_throughput(RING10, FlightConfig(), ENV, steps=5)


def test_efficiency_vanishes_at_extremes():
    peak = energy_efficiency(RING10, FlightConfig(speed=optimal_speed(1000.0, EP)), ENV, EP)
    assert energy_efficiency(RING10, FlightConfig(speed=1e-3), ENV, EP) < 1e-4 * peak
    assert energy_efficiency(RING10, FlightConfig(speed=1e4), ENV, EP) < 1e-4 * peak


def test_efficiency_interior_max_on_coarse_sweep_matches_fine_grid():
    coarse = np.arange(5, 61, 5.0)
    ee = [energy_efficiency(RING10, FlightConfig(speed=v), ENV, EP) for v in coarse]
    k = int(np.argmax(ee))
    assert 0 < k < len(coarse) - 1
    fine = np.arange(5.0, 60.0 + 1e-9, 0.1)
    ee_fine = [energy_efficiency(RING10, FlightConfig(speed=v), ENV, EP, steps=360) for v in fine]
    v_grid = fine[int(np.argmax(ee_fine))]
    assert abs(v_grid - coarse[k]) <= 5.0
    assert efficiency_optimal_speed(RING10, FlightConfig(), ENV, EP) == pytest.approx(v_grid, abs=0.1)


def test_ring_constructors():
    ring = ServiceRing.equal_angle(4, 1000.0)
    assert [round(math.hypot(p.x, p.y), 9) for p in ring.node_positions] == [500.0] * 4
    disc = ServiceRing.uniform_disc(50, 1000.0, np.random.default_rng(0))
    assert all(math.hypot(p.x, p.y) <= 1000.0 for p in disc.node_positions)
    with pytest.raises(ValueError):
        ServiceRing(1, (Position3D(2000.0, 0.0, 0.0),), 1000.0)
