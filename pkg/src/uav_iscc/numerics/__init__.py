"""Minimal dense linear algebra, reverse-mode differentiation, Adam, and the
probability kernels the actors and critics are built on."""

from .distributions import (
    DomainError,
    beta_entropy,
    beta_entropy_value,
    beta_log_prob,
    beta_mean,
    beta_sample,
    gaussian_entropy,
    gaussian_log_prob,
    gaussian_sample,
)
from .nn import (
    AttentionBlockParams,
    BetaHeadParams,
    DimensionError,
    MlpParams,
    attention_pool,
    attention_weights,
    mlp_forward,
)
from .optim import AdamState, adam_step, clip_grad_norm, global_grad_norm
from .tensor import GraphError, Tensor, concat, parameter, softmax, stack

__all__ = [
    "AdamState",
    "AttentionBlockParams",
    "BetaHeadParams",
    "DimensionError",
    "DomainError",
    "GraphError",
    "MlpParams",
    "Tensor",
    "adam_step",
    "attention_pool",
    "attention_weights",
    "beta_entropy",
    "beta_entropy_value",
    "beta_log_prob",
    "beta_mean",
    "beta_sample",
    "clip_grad_norm",
    "concat",
    "gaussian_entropy",
    "gaussian_log_prob",
    "gaussian_sample",
    "global_grad_norm",
    "mlp_forward",
    "parameter",
    "softmax",
    "stack",
]
