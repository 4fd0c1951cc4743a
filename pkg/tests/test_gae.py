"""Advantage estimation against a brute-force double-sum oracle."""

import numpy as np
import pytest

from uav_iscc.mappo import clip, compute_gae


def brute_force_gae(rewards, values, bootstrap, gamma, lam):
    t_len = len(rewards)
    ext = np.concatenate([values, [bootstrap]])
    deltas = np.array([rewards[t] + gamma * ext[t + 1] - ext[t] for t in range(t_len)])
    adv = np.zeros(t_len)
    for t in range(t_len):
        adv[t] = sum((gamma * lam) ** l * deltas[t + l] for l in range(t_len - t))
    return adv


def test_two_step_example():
    adv, ret = compute_gae(np.array([1.0, 1.0]), np.zeros(2), 0.0, 0.98, 0.95)
    assert adv[1] == pytest.approx(1.0)
    assert adv[0] == pytest.approx(1.0 + 0.98 * 0.95 * 1.0)
    assert np.allclose(ret, adv)


def test_lambda_zero_is_one_step_delta():
    rng = np.random.default_rng(0)
    r = rng.normal(size=10)
    v = rng.normal(size=10)
    adv, _ = compute_gae(r, v, 0.5, 0.9, 0.0)
    ext = np.concatenate([v, [0.5]])
    deltas = r + 0.9 * ext[1:] - v
    assert np.allclose(adv, deltas, atol=1e-12)


def test_constant_reward_fixed_point():
    gamma = 0.9
    r = np.full(20, 2.0)
    v = np.full(20, 2.0 / (1 - gamma))
    adv, _ = compute_gae(r, v, 2.0 / (1 - gamma), gamma, 0.7)
    assert np.allclose(adv, 0.0, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_matches_brute_force_on_random_sequences(seed):
    rng = np.random.default_rng(seed)
    r = rng.normal(size=10)
    v = rng.normal(size=10)
    boot = float(rng.normal())
    gamma = rng.uniform(0.8, 0.999)
    lam = rng.uniform(0.0, 1.0)
    adv, ret = compute_gae(r, v, boot, gamma, lam)
    want = brute_force_gae(r, v, boot, gamma, lam)
    assert np.max(np.abs(adv - want)) < 1e-10
    assert np.allclose(ret, adv + v)


def test_clip_cases():
    assert clip(1.05, 0.8, 1.2) == pytest.approx(1.05)
    assert clip(1.5, 0.8, 1.2) == pytest.approx(1.2)
    assert clip(0.1, 0.8, 1.2) == pytest.approx(0.8)
