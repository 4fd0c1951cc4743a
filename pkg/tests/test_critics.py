"""Attention critic: permutation invariance, reference-vs-batched agreement."""

import numpy as np
import pytest

from uav_iscc.mappo import CriticParams, critic_forward, critic_values_batch, state_values_batch


def make_critic(mu_in=8, uav_in=10, state_dim=30, kind="attention", seed=0):
    return CriticParams.create(mu_in, uav_in, state_dim, feature_dim=16, heads=4,
                               hidden=(8, 12), rng=np.random.default_rng(seed), kind=kind)


def random_instance(critic, k=2, m=2, t=3, seed=1):
    rng = np.random.default_rng(seed)
    mu_obs = rng.uniform(0, 1, size=(t, k, critic.encoder_mu.in_width - 4))
    mu_act = rng.uniform(0, 1, size=(t, k, 4))
    uav_obs = rng.uniform(0, 1, size=(t, m, critic.encoder_uav.in_width - 5))
    uav_act = rng.uniform(0, 1, size=(t, m, 5))
    return mu_obs, mu_act, uav_obs, uav_act


def test_batched_matches_reference_forward():
    critic = make_critic()
    mu_obs, mu_act, uav_obs, uav_act = random_instance(critic)
    values = critic_values_batch(critic, mu_obs, mu_act, uav_obs, uav_act, "mu").data
    for t in range(mu_obs.shape[0]):
        all_obs = [mu_obs[t, 0], mu_obs[t, 1], uav_obs[t, 0], uav_obs[t, 1]]
        all_act = [mu_act[t, 0], mu_act[t, 1], uav_act[t, 0], uav_act[t, 1]]
        for u in range(2):
            ref = critic_forward(critic, all_obs, all_act, num_mus=2, agent=u).item()
            assert values[t, u] == pytest.approx(ref, abs=1e-10)


def test_permutation_of_other_agents_leaves_value_unchanged():
    critic = make_critic(seed=2)
    rng = np.random.default_rng(3)
    k, m = 3, 2
    obs = [rng.uniform(0, 1, 4) for _ in range(k)] + [rng.uniform(0, 1, 5) for _ in range(m)]
    act = [rng.uniform(0, 1, 4) for _ in range(k)] + [rng.uniform(0, 1, 5) for _ in range(m)]
    critic2 = make_critic(mu_in=8, uav_in=10, seed=2)
    base = critic_forward(critic2, obs, act, num_mus=k, agent=0).item()
    # swap two other MU agents (same-type swap keeps encoder assignment)
    obs_p = [obs[0], obs[2], obs[1], obs[3], obs[4]]
    act_p = [act[0], act[2], act[1], act[3], act[4]]
    perm = critic_forward(critic2, obs_p, act_p, num_mus=k, agent=0).item()
    assert perm == pytest.approx(base, abs=1e-9)


def test_identical_other_agents_share_attention_weight():
    from uav_iscc.numerics import attention_weights, mlp_forward, Tensor, concat

    critic = make_critic(seed=4)
    rng = np.random.default_rng(5)
    obs = rng.uniform(0, 1, 4)
    act = rng.uniform(0, 1, 4)
    query = mlp_forward(critic.encoder_mu, Tensor(np.concatenate([obs, act])))
    twin = mlp_forward(critic.encoder_mu, Tensor(np.concatenate([obs * 0.5, act])))
    w = attention_weights(critic.attention, query, [twin, twin])
    assert np.allclose(w, 0.5, atol=1e-12)


def test_lone_agent_value_is_finite_zero_context():
    critic = make_critic(seed=6)
    rng = np.random.default_rng(7)
    value = critic_forward(critic, [rng.uniform(0, 1, 4)], [rng.uniform(0, 1, 4)],
                           num_mus=1, agent=0)
    assert np.isfinite(value.item())


def test_mlp_state_values_shared_across_agents():
    critic = make_critic(kind="mlp", seed=8)
    state = np.random.default_rng(9).uniform(0, 1, size=(5, 30))
    values = state_values_batch(critic, state, 4).data
    assert values.shape == (5, 4)
    assert np.allclose(values, values[:, :1])


def test_critic_gradients_flow_to_all_components():
    critic = make_critic(seed=10)
    mu_obs, mu_act, uav_obs, uav_act = random_instance(critic, seed=11)
    loss = (critic_values_batch(critic, mu_obs, mu_act, uav_obs, uav_act, "uav") ** 2).mean()
    loss.backward()
    for p in critic.parameters():
        assert p.grad is not None
        assert np.all(np.isfinite(p.grad))
