"""Heterogeneous multi-agent PPO: Beta-policy actors, attention critics,
GAE, clipped-surrogate updates, and the training loop."""

from .buffer import RolloutBatch, TypeRollout
from .critics import (
    CriticParams,
    critic_forward,
    critic_values_batch,
    encode_agents,
    state_values_batch,
)
from .gae import compute_gae
from .policies import (
    ActorParams,
    actor_forward,
    greedy_action,
    log_prob_entropy,
    sample_action,
)
from .ppo import UpdateAborted, actor_loss, clip, critic_loss, normalize_advantages, ppo_update
from .trainer import (
    EvalResult,
    Trainer,
    TrainerConfig,
    TrainerFault,
    penalty_rates,
    train,
)

__all__ = [
    "ActorParams",
    "CriticParams",
    "EvalResult",
    "RolloutBatch",
    "Trainer",
    "TrainerConfig",
    "TrainerFault",
    "TypeRollout",
    "UpdateAborted",
    "actor_forward",
    "actor_loss",
    "clip",
    "compute_gae",
    "critic_forward",
    "critic_loss",
    "critic_values_batch",
    "encode_agents",
    "greedy_action",
    "log_prob_entropy",
    "normalize_advantages",
    "penalty_rates",
    "ppo_update",
    "sample_action",
    "state_values_batch",
    "train",
]
