"""Training loop: centralized reward evaluation, decentralized per-type actors.

Each episode rolls the environment for the configured length with both agent
families acting in sequence (MUs choose associations and ratios first, UAVs
then split CPU and steer), summarizes the transitions, and runs the PPO
epochs per type. Everything is driven by named random streams spawned from
one seed, so a (seed, config) pair reproduces the run bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..agents import (
    MuAction,
    UavAction,
    apply_uav_actions,
    build_allocation,
    build_mu_observations,
    build_uav_observations,
    mu_reward,
    uav_reward,
)
from ..agents.observations import MuObservation, UavObservation
from ..env import ScenarioConfig, reset_world, world_step
from ..numerics import AdamState
from .buffer import RolloutBatch, TypeRollout
from .critics import CriticParams, critic_values_batch, state_values_batch
from .gae import compute_gae
from .policies import ActorParams, greedy_action, sample_action
from .ppo import ppo_update


class TrainerFault(RuntimeError):
    """Environment failure during training; state was checkpointed if possible."""


@dataclass
class TrainerConfig:
    episodes: int = 300            # training episodes (Mte)
    episode_length: int = 200      # slots per episode (Epl)
    ppo_epochs: int = 10           # update passes per episode (Pec)
    minibatches: int = 4
    discount: float = 0.98
    gae_lambda: float = 0.95
    clip_ratio: float = 0.2
    entropy_coef: float = 0.01
    actor_lr: float = 5e-4
    critic_lr: float = 5e-4
    grad_clip: float = 10.0
    hidden_sizes: tuple = (64, 128)
    feature_dim: int = 64
    attention_heads: int = 4
    policy: str = "beta"           # | "gaussian"
    critic: str = "attention"      # | "mlp"
    critic_target: str = "standard"  # | "paper" | "gae"
    seed: int = 0

    def validate(self) -> "TrainerConfig":
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ValueError("gae_lambda must lie in [0, 1]")
        if not 0.0 < self.clip_ratio < 1.0:
            raise ValueError("clip_ratio must lie in (0, 1)")
        if self.policy not in ("beta", "gaussian"):
            raise ValueError("policy must be 'beta' or 'gaussian'")
        if self.critic not in ("attention", "mlp"):
            raise ValueError("critic must be 'attention' or 'mlp'")
        if self.critic_target not in ("standard", "paper", "gae"):
            raise ValueError("critic_target must be standard|paper|gae")
        for name in ("episodes", "ppo_epochs"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.episode_length < 1 or self.minibatches < 1:
            raise ValueError("episode_length and minibatches must be >= 1")
        return self


@dataclass
class EvalResult:
    """Greedy-rollout summary plus raw material for exports."""

    episode_objectives: list
    objective: float
    mu_energy: float
    uav_energy: float
    flight_energy: float
    mean_mu_reward: float
    mean_uav_reward: float
    violation_rate: float
    penalty_rates: dict
    trajectory_rows: list          # first episode, one row per entity per slot
    reports: list = field(default_factory=list)  # first episode's slot reports


class Trainer:
    """Owns parameters, optimizer state, and the named random streams."""

    def __init__(self, config: TrainerConfig, scenario: ScenarioConfig):
        config.validate()
        scenario.validate()
        if scenario.num_mus < 1:
            raise ValueError("training requires at least one MU")
        self.config = config
        self.scenario = scenario
        seeds = np.random.SeedSequence(config.seed).spawn(4)
        self.init_rng = np.random.default_rng(seeds[0])
        self.env_rng = np.random.default_rng(seeds[1])
        self.action_rng = np.random.default_rng(seeds[2])
        self.update_rng = np.random.default_rng(seeds[3])

        cfg = scenario
        self.mu_obs_dim = MuObservation.length(cfg)
        self.uav_obs_dim = UavObservation.length(cfg)
        self.mu_act_dim = MuAction.dim(cfg)
        self.uav_act_dim = UavAction.dim(cfg)
        mu_lo = np.zeros(self.mu_act_dim)
        mu_hi = np.ones(self.mu_act_dim)
        uav_lo = np.concatenate([np.zeros(cfg.k_cap), [-cfg.uav_a_max, -cfg.uav_a_max]])
        uav_hi = np.concatenate([np.ones(cfg.k_cap), [cfg.uav_a_max, cfg.uav_a_max]])

        self.actors = {
            "mu": ActorParams.create(self.mu_obs_dim, mu_lo, mu_hi,
                                     config.hidden_sizes, self.init_rng, config.policy),
            "uav": ActorParams.create(self.uav_obs_dim, uav_lo, uav_hi,
                                      config.hidden_sizes, self.init_rng, config.policy),
        }
        state_dim = cfg.num_mus * self.mu_obs_dim + cfg.num_uavs * self.uav_obs_dim
        self.critics = {
            kind: CriticParams.create(
                self.mu_obs_dim + self.mu_act_dim, self.uav_obs_dim + self.uav_act_dim,
                state_dim, config.feature_dim, config.attention_heads,
                config.hidden_sizes, self.init_rng, config.critic)
            for kind in ("mu", "uav")
        }
        self.actor_opt = {k: AdamState(a.parameters(), lr=config.actor_lr)
                          for k, a in self.actors.items()}
        self.critic_opt = {k: AdamState(c.parameters(), lr=config.critic_lr)
                           for k, c in self.critics.items()}

    # ------------------------------------------------------------------
    # rollouts
    # ------------------------------------------------------------------
    def collect_episode(self, greedy: bool = False,
                        env_rng: np.random.Generator | None = None,
                        record_trajectory: bool = False) -> RolloutBatch:
        cfg = self.scenario
        t_len = self.config.episode_length
        env_rng = env_rng if env_rng is not None else self.env_rng
        world = reset_world(cfg, env_rng)
        k, m = cfg.num_mus, cfg.num_uavs

        mu = TypeRollout(obs=np.zeros((t_len, k, self.mu_obs_dim)),
                         actions=np.zeros((t_len, k, self.mu_act_dim)),
                         log_probs=np.zeros((t_len, k)),
                         rewards=np.zeros((t_len, k)))
        uav = TypeRollout(obs=np.zeros((t_len, m, self.uav_obs_dim)),
                          actions=np.zeros((t_len, m, self.uav_act_dim)),
                          log_probs=np.zeros((t_len, m)),
                          rewards=np.zeros((t_len, m)))
        state = np.zeros((t_len, k * self.mu_obs_dim + m * self.uav_obs_dim))
        batch = RolloutBatch(mu=mu, uav=uav, global_state=state)
        trajectory = [] if record_trajectory else None

        for t in range(t_len):
            mu_obs = np.stack([o.vector for o in build_mu_observations(world, cfg)])
            if greedy:
                mu_unit, _ = greedy_action(self.actors["mu"], mu_obs)
                mu_logp = np.zeros(k)
            else:
                mu_unit, _, mu_logp = sample_action(self.actors["mu"], mu_obs,
                                                    self.action_rng)
            mu_actions = [MuAction.from_vector(mu_unit[i], cfg) for i in range(k)]
            alloc = build_allocation(mu_actions, cfg)

            uav_obs = np.stack([o.vector for o in
                                build_uav_observations(world, alloc, cfg)])
            if greedy:
                uav_unit, _ = greedy_action(self.actors["uav"], uav_obs)
                uav_logp = np.zeros(m)
            else:
                uav_unit, _, uav_logp = sample_action(self.actors["uav"], uav_obs,
                                                      self.action_rng)
            uav_actions = [UavAction.from_vector(uav_unit[i], cfg) for i in range(m)]
            alloc, accels = apply_uav_actions(alloc, uav_actions, cfg)

            if record_trajectory:
                self._record_rows(trajectory, world, alloc, accels, t)

            next_world, report = world_step(world, alloc, accels, cfg, env_rng)
            mu_bd = [mu_reward(i, report, alloc, cfg) for i in range(k)]
            uav_bd = [uav_reward(i, report, next_world, alloc, cfg) for i in range(m)]

            mu.obs[t], mu.actions[t], mu.log_probs[t] = mu_obs, mu_unit, mu_logp
            uav.obs[t], uav.actions[t], uav.log_probs[t] = uav_obs, uav_unit, uav_logp
            mu.rewards[t] = [bd.reward for bd in mu_bd]
            uav.rewards[t] = [bd.reward for bd in uav_bd]
            state[t] = np.concatenate([mu_obs.ravel(), uav_obs.ravel()])
            batch.reports.append(report)
            batch.mu_breakdowns.append(mu_bd)
            batch.uav_breakdowns.append(uav_bd)
            if record_trajectory:
                for row, reward in zip(trajectory[-(k + m):],
                                       [bd.reward for bd in mu_bd]
                                       + [bd.reward for bd in uav_bd]):
                    row["reward"] = reward
            world = next_world

        batch.trajectory = trajectory
        return batch

    def _record_rows(self, rows: list, world, alloc, accels, t: int) -> None:
        for i, state in enumerate(world.mus):
            rows.append({
                "slot": t, "entity": f"mu{i}", "kind": "mu",
                "x": float(state.position[0]), "y": float(state.position[1]),
                "vx": 0.0, "vy": 0.0, "ax": 0.0, "ay": 0.0,
                "association": alloc.serving_uav(i),
                "rho": float(alloc.offload_ratio[i]),
                "eta": float(alloc.compress_ratio[i]),
                "reward": 0.0,
            })
        for i, state in enumerate(world.uavs):
            rows.append({
                "slot": t, "entity": f"uav{i}", "kind": "uav",
                "x": float(state.position[0]), "y": float(state.position[1]),
                "vx": float(state.velocity[0]), "vy": float(state.velocity[1]),
                "ax": float(accels[i][0]), "ay": float(accels[i][1]),
                "association": -1, "rho": 0.0, "eta": 0.0,
                "reward": 0.0,
            })

    # ------------------------------------------------------------------
    # value targets
    # ------------------------------------------------------------------
    def _values(self, batch: RolloutBatch, kind: str) -> np.ndarray:
        critic = self.critics[kind]
        if critic.kind == "mlp":
            n = batch.of(kind).obs.shape[1]
            return state_values_batch(critic, batch.global_state, n).data
        return critic_values_batch(critic, batch.mu.obs, batch.mu.actions,
                                   batch.uav.obs, batch.uav.actions, kind).data

    def prepare_batch(self, batch: RolloutBatch) -> RolloutBatch:
        cfg = self.config
        for kind in ("mu", "uav"):
            roll = batch.of(kind)
            roll.values = self._values(batch, kind)
            t_len, n = roll.values.shape
            roll.advantages = np.zeros((t_len, n))
            roll.returns = np.zeros((t_len, n))
            for u in range(n):
                adv, ret = compute_gae(roll.rewards[:, u], roll.values[:, u], 0.0,
                                       cfg.discount, cfg.gae_lambda)
                roll.advantages[:, u] = adv
                roll.returns[:, u] = ret
            next_values = np.vstack([roll.values[1:], np.zeros((1, n))])
            if cfg.critic_target == "paper":
                roll.targets = (1.0 - cfg.discount) * roll.rewards \
                    + cfg.discount * next_values
            elif cfg.critic_target == "gae":
                roll.targets = roll.returns
            else:
                roll.targets = roll.rewards + cfg.discount * next_values
        return batch

    # ------------------------------------------------------------------
    # training / evaluation
    # ------------------------------------------------------------------
    def train(self, progress=None, fault_checkpoint=None) -> list[dict]:
        """Full loop; returns one metric record per episode.

        An environment fault checkpoints the current parameters (when a path
        is given) and aborts with TrainerFault."""
        history = []
        for episode in range(self.config.episodes):
            try:
                batch = self.prepare_batch(self.collect_episode())
            except Exception as exc:
                if fault_checkpoint is not None:
                    self.save_checkpoint(fault_checkpoint)
                raise TrainerFault(f"environment fault in episode {episode}: {exc}") from exc
            stats = ppo_update(self, batch)
            record = self.episode_metrics(episode, batch)
            record.update(stats)
            history.append(record)
            if progress is not None:
                progress(record)
        return history

    def episode_metrics(self, episode: int, batch: RolloutBatch) -> dict:
        cfg = self.scenario
        objective = float(sum(r.objective(cfg.weight_factor) for r in batch.reports))
        mu_energy = float(sum(r.e_mu.sum() for r in batch.reports))
        uav_energy = float(sum(r.e_uav.sum() for r in batch.reports))
        flight = float(sum(r.e_flight.sum() for r in batch.reports))
        rates = penalty_rates(batch)
        return {
            "episode": episode,
            "mean_reward_mu": float(batch.mu.rewards.mean()),
            "mean_reward_uav": float(batch.uav.rewards.mean()),
            "objective": objective,
            "mu_energy": mu_energy,
            "uav_energy": uav_energy,
            "flight_energy": flight,
            **{f"penalty_rate_{k}": v for k, v in rates.items()},
        }

    def evaluate(self, episodes: int = 1, seed: int | None = None) -> EvalResult:
        """Deterministic greedy rollouts on a dedicated environment stream."""
        env_rng = np.random.default_rng(
            self.config.seed + 10_000 if seed is None else seed)
        objectives, mu_e, uav_e, fly_e = [], [], [], []
        mu_r, uav_r, violations, slots = [], [], 0, 0
        first_batch = None
        rate_acc: dict[str, list] = {}
        for ep in range(episodes):
            batch = self.collect_episode(greedy=True, env_rng=env_rng,
                                         record_trajectory=(ep == 0))
            if ep == 0:
                first_batch = batch
            objectives.append(sum(r.objective(self.scenario.weight_factor)
                                  for r in batch.reports))
            mu_e.append(sum(r.e_mu.sum() for r in batch.reports))
            uav_e.append(sum(r.e_uav.sum() for r in batch.reports))
            fly_e.append(sum(r.e_flight.sum() for r in batch.reports))
            mu_r.append(batch.mu.rewards.mean())
            uav_r.append(batch.uav.rewards.mean())
            for r in batch.reports:
                violations += int(np.sum(~r.deadline_met)) + int(np.sum(~r.radar_met))
                violations += int(np.sum(r.safety_violated))
                violations += int(np.sum(r.boundary_overshoot > 0))
                slots += r.deadline_met.size + 3 * r.radar_met.size
            for name, value in penalty_rates(batch).items():
                rate_acc.setdefault(name, []).append(value)
        return EvalResult(
            episode_objectives=[float(v) for v in objectives],
            objective=float(np.mean(objectives)),
            mu_energy=float(np.mean(mu_e)),
            uav_energy=float(np.mean(uav_e)),
            flight_energy=float(np.mean(fly_e)),
            mean_mu_reward=float(np.mean(mu_r)),
            mean_uav_reward=float(np.mean(uav_r)),
            violation_rate=float(violations / max(slots, 1)),
            penalty_rates={k: float(np.mean(v)) for k, v in rate_acc.items()},
            trajectory_rows=first_batch.trajectory or [],
            reports=first_batch.reports,
        )

    # ------------------------------------------------------------------
    # checkpoints
    # ------------------------------------------------------------------
    def named_parameters(self) -> dict:
        out = {}
        for kind in ("mu", "uav"):
            for i, p in enumerate(self.actors[kind].parameters()):
                out[f"actor_{kind}/{i}"] = p
            for i, p in enumerate(self.critics[kind].parameters()):
                out[f"critic_{kind}/{i}"] = p
        return out

    def config_hash(self) -> str:
        payload = json.dumps({"trainer": asdict(self.config),
                              "scenario": asdict(self.scenario)},
                             sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def save_checkpoint(self, path) -> None:
        arrays = {name: p.data for name, p in self.named_parameters().items()}
        np.savez(path, __version__=np.array(1),
                 __config_hash__=np.array(self.config_hash()), **arrays)

    def load_checkpoint(self, path) -> None:
        blob = np.load(path, allow_pickle=False)
        stored = str(blob["__config_hash__"])
        if stored != self.config_hash():
            raise ValueError(
                f"checkpoint config hash {stored} does not match trainer "
                f"{self.config_hash()}")
        for name, p in self.named_parameters().items():
            data = blob[name]
            if data.shape != p.data.shape:
                raise ValueError(f"checkpoint tensor {name} has shape {data.shape}, "
                                 f"expected {p.data.shape}")
            p.data = data.astype(np.float64)


def penalty_rates(batch: RolloutBatch) -> dict:
    """Fraction of agent-slots where each penalty family was active."""
    lat, col, bound, rad = [], [], [], []
    for mu_bd, uav_bd in zip(batch.mu_breakdowns, batch.uav_breakdowns):
        lat.extend(bd.p_latency > 1.0 for bd in mu_bd)
        lat.extend(bd.p_latency > 1.0 for bd in uav_bd)
        col.extend(bd.p_collision > 1.0 for bd in uav_bd)
        bound.extend(bd.p_boundary > 1.0 for bd in uav_bd)
        rad.extend(bd.p_radar > 1.0 for bd in uav_bd)
    return {
        "latency": float(np.mean(lat)) if lat else 0.0,
        "collision": float(np.mean(col)) if col else 0.0,
        "boundary": float(np.mean(bound)) if bound else 0.0,
        "radar": float(np.mean(rad)) if rad else 0.0,
    }


def train(config: TrainerConfig, scenario: ScenarioConfig,
          progress=None) -> tuple[Trainer, list[dict]]:
    """Build a trainer, run the full loop, return (trainer, metric history)."""
    trainer = Trainer(config, scenario)
    history = trainer.train(progress=progress)
    return trainer, history
