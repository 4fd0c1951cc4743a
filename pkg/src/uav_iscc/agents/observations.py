"""Per-agent observation vectors, min-max scaled into the unit interval.

MU agents see their own index, task, position, and every UAV position. UAV
agents see their index, a fixed-capacity roster of currently associated MUs
(position, task, offload and compression choices), their own position, and
the other UAVs' positions. Roster slots beyond the served count are zero
padded and flagged in the mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..env.config import ScenarioConfig
from ..env.types import Allocation, TaskSpec, WorldState


def _unit(value: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    return float(np.clip((value - lo) / (hi - lo), 0.0, 1.0))


def scale_task(task: TaskSpec, cfg: ScenarioConfig) -> np.ndarray:
    return np.array([
        _unit(task.data_bits, cfg.data_bits_min, cfg.data_bits_max),
        _unit(task.compute_density, cfg.compute_density_min, cfg.compute_density_max),
        _unit(task.compress_density, cfg.compress_density_min, cfg.compress_density_max),
        _unit(task.compress_ratio, cfg.compress_ratio_min, cfg.compress_ratio_max),
        _unit(task.deadline, cfg.deadline_min, cfg.deadline_max),
    ])


@dataclass
class MuObservation:
    index: int
    vector: np.ndarray

    @staticmethod
    def length(cfg: ScenarioConfig) -> int:
        return 1 + 5 + 2 * cfg.num_uavs + 2


@dataclass
class UavObservation:
    index: int
    vector: np.ndarray
    roster: np.ndarray       # MU indices filling the roster slots, -1 when empty
    roster_mask: np.ndarray  # 1.0 where the slot is occupied

    @staticmethod
    def length(cfg: ScenarioConfig) -> int:
        return 1 + 9 * cfg.k_cap + 2 + 2 * (cfg.num_uavs - 1)


def build_mu_observations(world: WorldState, cfg: ScenarioConfig) -> list[MuObservation]:
    width = cfg.region_width
    uav_xy = (world.uav_positions() / width).ravel() if world.num_uavs else np.zeros(0)
    out = []
    for k, mu in enumerate(world.mus):
        vec = np.concatenate([
            [k / max(cfg.num_mus, 1)],
            scale_task(mu.task, cfg),
            uav_xy,
            mu.position / width,
        ])
        out.append(MuObservation(index=k, vector=vec))
    return out


def roster_of(alloc: Allocation, m: int, cfg: ScenarioConfig) -> np.ndarray:
    """Served MU indices in ascending order, padded with -1 to the capacity."""
    served = alloc.served_by(m)[: cfg.k_cap]
    roster = np.full(cfg.k_cap, -1, dtype=int)
    roster[: served.size] = served
    return roster


def build_uav_observations(world: WorldState, alloc: Allocation,
                           cfg: ScenarioConfig) -> list[UavObservation]:
    width = cfg.region_width
    out = []
    for m in range(world.num_uavs):
        roster = roster_of(alloc, m, cfg)
        mask = (roster >= 0).astype(np.float64)
        slots = []
        for k in roster:
            if k < 0:
                slots.append(np.zeros(9))
                continue
            mu = world.mus[k]
            slots.append(np.concatenate([
                mu.position / width,
                scale_task(mu.task, cfg),
                [alloc.offload_ratio[k], alloc.compress_ratio[k]],
            ]))
        others = [world.uavs[i].position / width
                  for i in range(world.num_uavs) if i != m]
        vec = np.concatenate([
            [m / max(cfg.num_uavs, 1)],
            *slots,
            world.uavs[m].position / width,
            *(others if others else [np.zeros(0)]),
        ])
        out.append(UavObservation(index=m, vector=vec, roster=roster, roster_mask=mask))
    return out


def build_observations(world: WorldState, alloc: Allocation,
                       cfg: ScenarioConfig) -> tuple[list[MuObservation], list[UavObservation]]:
    """Both agent families; UAV rosters reflect the slot's fresh associations."""
    return build_mu_observations(world, cfg), build_uav_observations(world, alloc, cfg)
