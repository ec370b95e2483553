import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavlink.geometry import Position3D, RegionSpec, distance_3d, horizontal_distance
from uavlink.rng import RngStream
from uavlink.scenario import (
    BsLayout,
    ScenarioConfig,
    deploy_bs,
    deploy_bs_grid,
    deploy_bs_uniform,
)

coord = st.floats(-1e4, 1e4, allow_nan=False)
height = st.floats(0, 1e4, allow_nan=False)
points = st.builds(Position3D, coord, coord, height)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((0, 0, 30), (0, 0, 100), 0.0),
        ((0, 0, 30), (300, 400, 100), 500.0),
        ((10, 10, 0), (10, 10, 0), 0.0),
    ],
)
def test_horizontal_distance(p, q, expected):
    assert horizontal_distance(Position3D(*p), Position3D(*q)) == pytest.approx(expected)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((0, 0, 30), (0, 0, 100), 70.0),
        ((0, 0, 0), (3, 4, 12), 13.0),
        ((300, 400, 30), (0, 0, 30), 500.0),
    ],
)
def test_distance_3d(p, q, expected):
    assert distance_3d(Position3D(*p), Position3D(*q)) == pytest.approx(expected)


@given(points, points)
def test_pythagoras_and_symmetry(p, q):
    r = horizontal_distance(p, q)
    d = distance_3d(p, q)
    assert r == horizontal_distance(q, p)
    assert d >= r - 1e-9 * max(1.0, d)
    assert d**2 == pytest.approx(r**2 + (p.h - q.h) ** 2, rel=1e-9, abs=1e-9)


def test_position_rejects_negative_height():
    with pytest.raises(ValueError):
        Position3D(0, 0, -1)
    with pytest.raises(ValueError):
        Position3D(math.inf, 0, 1)


def test_region_rejects_non_positive():
    with pytest.raises(ValueError):
        RegionSpec(0, 10)


def test_rng_stream_repeats():
    a = RngStream(7, 3).generator().random(5)
    b = RngStream(7, 3).generator().random(5)
    c = RngStream(7, 4).generator().random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_deploy_deterministic():
    region = RegionSpec(1000, 1000)
    first = deploy_bs_uniform(region, 10, 30.0, RngStream(7))
    second = deploy_bs_uniform(region, 10, 30.0, RngStream(7))
    assert first == second
    assert all(p.h == 30.0 for p in first)


def test_deploy_bounds():
    region = RegionSpec(1000, 600)
    pts = deploy_bs_uniform(region, 1000, 30.0, RngStream(3))
    assert all(0 <= p.x <= 1000 and 0 <= p.y <= 600 for p in pts)


def test_deploy_mean_matches_uniform_moments():
    pts = deploy_bs_uniform(RegionSpec(1000, 1000), 10_000, 30.0, RngStream(1))
    mean_x = np.mean([p.x for p in pts])
    assert abs(mean_x - 500.0) <= 3 * (1000 / math.sqrt(12)) / math.sqrt(10_000)


def test_deploy_rejects_zero():
    with pytest.raises(ValueError):
        deploy_bs_uniform(RegionSpec(1000, 1000), 0, 30.0, RngStream(1))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 100_000), st.integers(0, 2**64 - 1))
def test_deploy_bounds_and_reproducible_any_n(n, seed):
    region = RegionSpec(1000, 1000)
    xy1 = np.array([(p.x, p.y) for p in deploy_bs_uniform(region, n, 30.0, RngStream(seed))])
    xy2 = np.array([(p.x, p.y) for p in deploy_bs_uniform(region, n, 30.0, RngStream(seed))])
    assert np.array_equal(xy1, xy2)
    assert xy1.min() >= 0 and xy1.max() <= 1000


def test_grid_layout_inside_region_and_distinct():
    pts = deploy_bs_grid(RegionSpec(1000, 1000), 10, 30.0)
    assert len({(p.x, p.y) for p in pts}) == 10
    assert all(0 < p.x < 1000 and 0 < p.y < 1000 for p in pts)


def test_scenario_defaults_and_validation():
    cfg = ScenarioConfig()
    assert cfg.uav_xy == (500.0, 500.0)
    assert 10 * math.log10(cfg.noise_power) + 30 == pytest.approx(-114.0)
    assert 10 * math.log10(cfg.bs_tx_power) == pytest.approx(-6.0)
    with pytest.raises(ValueError):
        ScenarioConfig(bs_count=0)
    with pytest.raises(ValueError):
        ScenarioConfig(uav_xy=(2000.0, 0.0))
    with pytest.raises(ValueError):
        ScenarioConfig(layout=BsLayout.FIXED, bs_count=2, bs_xy=((1.0, 1.0),))


def test_fixed_layout_positions():
    cfg = ScenarioConfig(layout=BsLayout.FIXED, bs_count=1, bs_xy=((500.0, 500.0),))
    assert deploy_bs(cfg, RngStream(0)) == [Position3D(500.0, 500.0, 30.0)]
