"""Centralized critics: per-type attention critic over all agents'
observation-action features, with a plain global-state MLP as the ablation.

Agents are globally ordered MUs first, then UAVs. Each critic owns one
encoder per agent type, an attention block, and a value head that reads the
pooled context concatenated with the agent's own feature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import (
    AttentionBlockParams,
    MlpParams,
    Tensor,
    attention_pool,
    concat,
    mlp_forward,
    softmax,
    stack,
)

_MASK = -1e30  # blocks self-attention without inf arithmetic


@dataclass
class CriticParams:
    """Value network of one agent type."""

    encoder_mu: MlpParams
    encoder_uav: MlpParams
    attention: AttentionBlockParams
    value_head: MlpParams
    kind: str = "attention"       # "attention" | "mlp"
    state_head: MlpParams = None  # used by the "mlp" ablation

    @classmethod
    def create(cls, mu_in: int, uav_in: int, state_dim: int, feature_dim: int,
               heads: int, hidden: tuple, rng: np.random.Generator,
               kind: str = "attention") -> "CriticParams":
        enc_mu = MlpParams.create([mu_in, hidden[0], feature_dim], rng)
        enc_uav = MlpParams.create([uav_in, hidden[0], feature_dim], rng)
        attention = AttentionBlockParams.create(feature_dim, heads, rng)
        value_head = MlpParams.create([2 * feature_dim, *hidden, 1], rng)
        state_head = MlpParams.create([state_dim, *hidden, 1], rng)
        return cls(encoder_mu=enc_mu, encoder_uav=enc_uav, attention=attention,
                   value_head=value_head, kind=kind, state_head=state_head)

    def parameters(self):
        if self.kind == "mlp":
            return self.state_head.parameters()
        return (self.encoder_mu.parameters() + self.encoder_uav.parameters()
                + self.attention.parameters() + self.value_head.parameters())


def encode_agents(params: CriticParams, mu_inputs, uav_inputs) -> Tensor:
    """Per-agent features [.., U, V] from the type-matched encoders."""
    parts = []
    if mu_inputs is not None and mu_inputs.shape[-2] > 0:
        parts.append(mlp_forward(params.encoder_mu, mu_inputs))
    if uav_inputs is not None and uav_inputs.shape[-2] > 0:
        parts.append(mlp_forward(params.encoder_uav, uav_inputs))
    return concat(parts, axis=-2) if len(parts) > 1 else parts[0]


def critic_forward(params: CriticParams, all_obs: list, all_acts: list,
                   num_mus: int, agent: int) -> Tensor:
    """Reference per-sample value for one agent (the batched path must agree).

    `all_obs`/`all_acts` are per-agent vectors in global order. A lone agent
    pools an all-zero context.
    """
    feats = []
    for u, (o, a) in enumerate(zip(all_obs, all_acts)):
        enc = params.encoder_mu if u < num_mus else params.encoder_uav
        feats.append(mlp_forward(enc, concat([Tensor(o), Tensor(a)], axis=0)))
    others = [feats[w] for w in range(len(feats)) if w != agent]
    context = attention_pool(params.attention, feats[agent], others)
    return mlp_forward(params.value_head, concat([context, feats[agent]], axis=0))


def critic_values_batch(params: CriticParams, mu_obs, mu_act, uav_obs, uav_act,
                        want: str) -> Tensor:
    """Values for every agent of one type across a batch of time steps.

    Inputs: mu_obs [T, K, d_mu_obs], mu_act [T, K, A_mu], uav_obs [T, M, ...],
    uav_act [T, M, ...]; `want` selects "mu" or "uav" columns of the output.
    Returns a Tensor [T, U_want].
    """
    t_len, k = mu_obs.shape[0], mu_obs.shape[1]
    m = uav_obs.shape[1]
    mu_in = Tensor(np.concatenate([mu_obs, mu_act], axis=-1)) if k else None
    uav_in = Tensor(np.concatenate([uav_obs, uav_act], axis=-1)) if m else None
    feats = encode_agents(params, mu_in, uav_in)          # [T, U, V]
    total = k + m
    block = params.attention
    scale = 1.0 / np.sqrt(block.head_dim)
    mask = np.zeros((total, total))
    np.fill_diagonal(mask, _MASK)
    head_ctx = []
    for h in range(block.heads):
        q = feats @ block.w_que[h].transpose()            # [T, U, Vh]
        key = feats @ block.w_key[h].transpose()
        val = feats @ block.w_val[h].transpose()
        scores = (q @ key.swapaxes(-1, -2)) * scale + mask
        weights = softmax(scores, axis=-1)                # [T, U, U]
        head_ctx.append(weights @ val)                    # [T, U, Vh]
    context = concat(head_ctx, axis=-1) @ block.w_mix      # [T, U, V]
    joined = concat([context, feats], axis=-1)             # [T, U, 2V]
    values = mlp_forward(params.value_head, joined)        # [T, U, 1]
    values = values.reshape(t_len, total)
    return values[:, :k] if want == "mu" else values[:, k:]


def state_values_batch(params: CriticParams, global_state: np.ndarray,
                       n_agents: int) -> Tensor:
    """MLP-ablation values: one V(s) per step, shared by the type's agents."""
    v = mlp_forward(params.state_head, Tensor(global_state))  # [T, 1]
    ones = Tensor(np.ones((1, n_agents)))
    return v @ ones
