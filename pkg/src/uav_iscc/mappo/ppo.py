"""Clipped-surrogate PPO updates for both agent types."""

from __future__ import annotations

import numpy as np

from ..numerics import Tensor, adam_step, clip_grad_norm
from .buffer import RolloutBatch
from .critics import critic_values_batch, state_values_batch
from .policies import log_prob_entropy


class UpdateAborted(RuntimeError):
    """A non-finite loss interrupted the update; diagnostics attached."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def clip(x, lo: float, hi: float):
    """Piecewise identity limited to [lo, hi]; works on tensors and floats."""
    if isinstance(x, Tensor):
        return x.clip(lo, hi)
    return float(np.clip(x, lo, hi))


def normalize_advantages(adv: np.ndarray) -> np.ndarray:
    std = adv.std()
    return (adv - adv.mean()) / (std + 1e-8)


def actor_loss(actor, obs_mb, act_mb, logp_old, adv_norm, clip_ratio: float,
               entropy_coef: float) -> tuple[Tensor, dict]:
    """-(mean(min(ratio*A, clip(ratio)*A)) + entropy bonus)."""
    logp_new, entropy = log_prob_entropy(actor, Tensor(obs_mb), act_mb)
    ratio = (logp_new - logp_old).exp()
    adv = Tensor(adv_norm)
    surr = (ratio * adv).minimum(ratio.clip(1.0 - clip_ratio, 1.0 + clip_ratio) * adv)
    loss = -(surr.mean() + entropy_coef * entropy.mean())
    stats = {
        "entropy": float(entropy.data.mean()),
        "clip_fraction": float(np.mean(np.abs(ratio.data - 1.0) > clip_ratio)),
        "approx_kl": float(np.mean(logp_old - logp_new.data)),
    }
    return loss, stats


def critic_loss(critic, batch: RolloutBatch, kind: str, idx: np.ndarray,
                targets: np.ndarray) -> Tensor:
    if critic.kind == "mlp":
        values = state_values_batch(critic, batch.global_state[idx],
                                    targets.shape[1])
    else:
        values = critic_values_batch(critic, batch.mu.obs[idx], batch.mu.actions[idx],
                                     batch.uav.obs[idx], batch.uav.actions[idx], kind)
    diff = values - Tensor(targets)
    return (diff * diff).mean()


def ppo_update(trainer, batch: RolloutBatch) -> dict:
    """Run the configured epochs of minibatch updates; returns mean statistics.

    Minibatches are drawn over time steps so the attention critics always see
    the complete agent set of each included step. Advantages are normalized
    per minibatch. A non-finite loss aborts with diagnostics.
    """
    cfg = trainer.config
    t_len = batch.length
    stats: dict[str, list] = {}

    def push(name, value):
        stats.setdefault(name, []).append(value)

    for _ in range(cfg.ppo_epochs):
        perm = trainer.update_rng.permutation(t_len)
        for idx in np.array_split(perm, min(cfg.minibatches, t_len)):
            if idx.size == 0:
                continue
            for kind in ("mu", "uav"):
                roll = batch.of(kind)
                actor = trainer.actors[kind]
                a_loss, a_stats = actor_loss(
                    actor, roll.obs[idx], roll.actions[idx], roll.log_probs[idx],
                    normalize_advantages(roll.advantages[idx]),
                    cfg.clip_ratio, cfg.entropy_coef)
                if not np.isfinite(a_loss.data):
                    raise UpdateAborted(f"non-finite {kind} actor loss", {
                        "kind": kind, "loss": float(a_loss.data),
                        "logp_old": roll.log_probs[idx].tolist()})
                a_loss.backward()
                clip_grad_norm(actor.parameters(), cfg.grad_clip)
                adam_step(trainer.actor_opt[kind])
                push(f"{kind}_actor_loss", float(a_loss.data))
                for name, value in a_stats.items():
                    push(f"{kind}_{name}", value)

                c_loss = critic_loss(trainer.critics[kind], batch, kind, idx,
                                     roll.targets[idx])
                if not np.isfinite(c_loss.data):
                    raise UpdateAborted(f"non-finite {kind} critic loss", {
                        "kind": kind, "loss": float(c_loss.data)})
                c_loss.backward()
                clip_grad_norm(trainer.critics[kind].parameters(), cfg.grad_clip)
                adam_step(trainer.critic_opt[kind])
                push(f"{kind}_critic_loss", float(c_loss.data))
    return {name: float(np.mean(vals)) for name, vals in stats.items()}
