"""Gauss-Markov mobility and UAV kinematics."""

import numpy as np
import pytest

from uav_iscc.env import MuState, ScenarioConfig, UavState, advance_kinematics, step_mobility


def make_cfg(**kw):
    cfg = ScenarioConfig()
    for k, v in kw.items():
        setattr(cfg, k, v)
    return cfg.validate()


def make_mu(pos=(500.0, 500.0), speed=1.0, heading=0.0):
    return MuState(position=np.array(pos, dtype=float), speed=speed, heading=heading)


def make_uav(pos=(500.0, 500.0), vel=(0.0, 0.0)):
    return UavState(position=np.array(pos, dtype=float),
                    velocity=np.array(vel, dtype=float),
                    acceleration=np.zeros(2),
                    target_position=np.array([100.0, 100.0]),
                    doppler_phase=1.0 + 0j, clutter_gain=0.0 + 0j,
                    decompress_density=200.0)


def test_full_memory_keeps_speed_and_heading():
    cfg = make_cfg(mobility_speed_memory=1.0, mobility_heading_memory=1.0)
    mu = make_mu(speed=4.0, heading=0.7)
    out = step_mobility(mu, cfg, np.random.default_rng(0))
    assert out.speed == pytest.approx(4.0)
    assert out.heading == pytest.approx(0.7)


def test_zero_memory_zero_noise_jumps_to_mean():
    cfg = make_cfg(mobility_speed_memory=0.0, mobility_speed_noise_std=1e-30,
                   mobility_mean_speed=2.0)
    mu = make_mu(speed=9.0)
    out = step_mobility(mu, cfg, np.random.default_rng(1))
    assert out.speed == pytest.approx(2.0, abs=1e-12)


def test_half_memory_mixes_speed():
    # 0.5*4 + 0.5*2 = 3 with no innovation
    cfg = make_cfg(mobility_speed_memory=0.5, mobility_speed_noise_std=1e-30,
                   mobility_mean_speed=2.0)
    out = step_mobility(make_mu(speed=4.0), cfg, np.random.default_rng(2))
    assert out.speed == pytest.approx(3.0, abs=1e-10)


def test_position_advances_along_previous_heading():
    cfg = make_cfg()
    mu = make_mu(pos=(100.0, 100.0), speed=2.0, heading=np.pi / 2)
    out = step_mobility(mu, cfg, np.random.default_rng(3))
    assert np.allclose(out.position, [100.0, 102.0])


def test_walls_reflect_and_clamp():
    cfg = make_cfg(mobility_speed_memory=1.0, mobility_heading_memory=1.0)
    mu = make_mu(pos=(999.5, 500.0), speed=3.0, heading=0.0)
    out = step_mobility(mu, cfg, np.random.default_rng(4))
    assert out.position[0] == pytest.approx(1000.0)
    assert abs(out.heading) == pytest.approx(np.pi)
    assert 0.0 <= out.position[0] <= cfg.region_width


def test_positions_stay_in_region_long_run():
    cfg = make_cfg()
    rng = np.random.default_rng(5)
    mu = make_mu(pos=(10.0, 990.0), speed=5.0, heading=2.0)
    for _ in range(500):
        mu = step_mobility(mu, cfg, rng)
        assert 0.0 <= mu.position[0] <= cfg.region_width
        assert 0.0 <= mu.position[1] <= cfg.region_width
        assert mu.speed >= 0.0


def test_kinematics_pure_drift():
    cfg = make_cfg()
    uav, over = advance_kinematics(make_uav(pos=(100.0, 100.0), vel=(1.0, 0.0)),
                                   np.zeros(2), cfg)
    assert np.allclose(uav.position, [101.0, 100.0])
    assert over == 0.0


def test_kinematics_half_a_t_squared():
    cfg = make_cfg()
    uav, _ = advance_kinematics(make_uav(), np.array([2.0, 0.0]), cfg)
    assert np.allclose(uav.position, [501.0, 500.0])
    assert np.allclose(uav.velocity, [2.0, 0.0])


def test_speed_and_acceleration_limits_enforced():
    cfg = make_cfg()
    rng = np.random.default_rng(6)
    uav = make_uav(vel=(19.0, 0.0))
    for _ in range(200):
        cmd = rng.uniform(-15.0, 15.0, size=2)
        uav, _ = advance_kinematics(uav, cmd, cfg)
        assert np.linalg.norm(uav.velocity) <= cfg.uav_v_max + 1e-12
        assert np.linalg.norm(uav.acceleration) <= cfg.uav_a_max + 1e-12
        assert np.all(uav.position >= 0.0) and np.all(uav.position <= cfg.region_width)


def test_boundary_overshoot_reported():
    cfg = make_cfg()
    uav, over = advance_kinematics(make_uav(pos=(999.0, 500.0), vel=(10.0, 0.0)),
                                   np.zeros(2), cfg)
    assert uav.position[0] == pytest.approx(1000.0)
    assert over == pytest.approx(9.0)
    assert uav.velocity[0] == 0.0  # outward component zeroed at the wall
