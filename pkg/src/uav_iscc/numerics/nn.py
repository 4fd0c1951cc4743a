"""Dense network building blocks: tanh MLPs, positive Beta-shape heads,
and query-key-value attention pooling over variable agent sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import Tensor, concat, parameter, softmax, stack


class DimensionError(Exception):
    """Input width does not chain with the layer it feeds."""


@dataclass
class MlpParams:
    """Fully connected stack: tanh on hidden layers, identity on the output."""

    layers: list  # list of (weight Tensor [in, out], bias Tensor [out])

    @classmethod
    def create(cls, sizes, rng: np.random.Generator) -> "MlpParams":
        layers = []
        for n_in, n_out in zip(sizes[:-1], sizes[1:]):
            w = parameter((n_in, n_out), rng)
            b = parameter(np.zeros(n_out))
            layers.append((w, b))
        return cls(layers=layers)

    def parameters(self):
        return [t for pair in self.layers for t in pair]

    @property
    def in_width(self) -> int:
        return self.layers[0][0].shape[0]

    @property
    def out_width(self) -> int:
        return self.layers[-1][0].shape[1]


def mlp_forward(params: MlpParams, x: Tensor) -> Tensor:
    """Run the MLP; `x` may carry arbitrary leading batch dimensions."""
    x = Tensor._lift(x)
    for i, (w, b) in enumerate(params.layers):
        if x.shape[-1] != w.shape[0]:
            raise DimensionError(
                f"layer {i}: input width {x.shape[-1]} != expected {w.shape[0]}"
            )
        x = x @ w + b
        if i < len(params.layers) - 1:
            x = x.tanh()
    return x


@dataclass
class BetaHeadParams:
    """Maps raw network outputs to per-dimension Beta shapes above one.

    Raw outputs come in pairs per action dimension; both shape parameters go
    through 1 + softplus so the resulting densities stay unimodal. Each
    dimension owns a half-range `h`: the unit-interval draw x maps to
    center + h * (2x - 1).
    """

    action_dim: int
    lo: np.ndarray  # per-dimension interval lower bounds
    hi: np.ndarray  # per-dimension interval upper bounds

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=np.float64)
        self.hi = np.asarray(self.hi, dtype=np.float64)
        if np.any(self.hi <= self.lo):
            raise ValueError("action intervals must have positive width")

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def shapes_from_raw(self, raw: Tensor) -> tuple[Tensor, Tensor]:
        """Split raw [..., 2*A] into (alpha-like, beta-like), both > 1."""
        if raw.shape[-1] != 2 * self.action_dim:
            raise DimensionError(
                f"beta head expects width {2 * self.action_dim}, got {raw.shape[-1]}"
            )
        a_raw = raw[..., : self.action_dim]
        b_raw = raw[..., self.action_dim :]
        one = 1.0
        return one + a_raw.softplus(), one + b_raw.softplus()

    def to_native(self, unit: np.ndarray) -> np.ndarray:
        return self.lo + unit * self.widths

    def to_unit(self, native: np.ndarray) -> np.ndarray:
        return (native - self.lo) / self.widths


@dataclass
class AttentionBlockParams:
    """Per-head query/key/value maps plus a linear mix back to feature width."""

    heads: int
    feature_dim: int
    w_que: list = field(default_factory=list)  # per head [head_dim, V]
    w_key: list = field(default_factory=list)
    w_val: list = field(default_factory=list)
    w_mix: Tensor = None  # [heads*head_dim, V]

    @classmethod
    def create(cls, feature_dim: int, heads: int, rng: np.random.Generator) -> "AttentionBlockParams":
        if heads < 1 or feature_dim % heads != 0:
            raise ValueError("head count must be >= 1 and divide the feature width")
        head_dim = feature_dim // heads
        blk = cls(heads=heads, feature_dim=feature_dim)
        for _ in range(heads):
            blk.w_que.append(parameter((head_dim, feature_dim), rng))
            blk.w_key.append(parameter((head_dim, feature_dim), rng))
            blk.w_val.append(parameter((head_dim, feature_dim), rng))
        blk.w_mix = parameter((heads * head_dim, feature_dim), rng)
        return blk

    @property
    def head_dim(self) -> int:
        return self.feature_dim // self.heads

    def parameters(self):
        return [*self.w_que, *self.w_key, *self.w_val, self.w_mix]


def attention_pool(block: AttentionBlockParams, query_feature: Tensor, other_features) -> Tensor:
    """Pool other agents' features into a context vector of length V.

    Per head, weights over `other_features` come from a softmax of scaled
    key-query inner products (scale 1/sqrt(head_dim)); the head outputs
    sum(weight * W_val z) and are concatenated then linearly mixed back to
    length V. An empty `other_features` yields the zero vector.
    """
    query_feature = Tensor._lift(query_feature)
    if not other_features:
        return Tensor(np.zeros(block.feature_dim))
    others = stack([Tensor._lift(z) for z in other_features], axis=0)  # [N, V]
    scale = 1.0 / np.sqrt(block.head_dim)
    head_outputs = []
    for h in range(block.heads):
        q = block.w_que[h] @ query_feature            # [head_dim]
        keys = others @ block.w_key[h].transpose()    # [N, head_dim]
        weights = softmax(keys @ q * scale, axis=0)   # [N]
        vals = others @ block.w_val[h].transpose()    # [N, head_dim]
        head_outputs.append(weights @ vals)           # [head_dim]
    return concat(head_outputs, axis=0) @ block.w_mix


def attention_weights(block: AttentionBlockParams, query_feature, other_features) -> np.ndarray:
    """Per-head weight vectors [heads, N] for inspection and tests."""
    q_np = np.asarray(Tensor._lift(query_feature).data)
    others = np.stack([np.asarray(Tensor._lift(z).data) for z in other_features])
    scale = 1.0 / np.sqrt(block.head_dim)
    rows = []
    for h in range(block.heads):
        scores = (others @ block.w_key[h].data.T) @ (block.w_que[h].data @ q_np) * scale
        e = np.exp(scores - scores.max())
        rows.append(e / e.sum())
    return np.stack(rows)
