"""Rician MIMO channels, heuristic beamforming, uplink rates, radar sensing.

All receivers sit on the UAVs. The uplink from each served MU is decoded with
an MMSE combiner against inter-MU interference plus the leakage of the radar
waveform; each UAV simultaneously steers a full-power sensing beam at its
ground target and filters the echo for maximum sensing SINR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .types import Allocation, UavState, WorldState


def steering_vector(angle: float, n: int) -> np.ndarray:
    """Uniform linear array response at half-wavelength spacing."""
    if n < 1:
        raise ValueError("antenna count must be >= 1")
    idx = np.arange(n)
    return np.exp(1j * np.pi * math.sin(angle) * idx)


def elevation_angle(horizontal_dist: float, altitude: float) -> float:
    return math.atan2(altitude, horizontal_dist)


def build_channel(mu_pos: np.ndarray, uav_pos: np.ndarray, cfg: ScenarioConfig,
                  rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """One Rician channel draw between an MU and a UAV.

    Returns (H [W_R, W_T], distance). The line-of-sight part is the rank-one
    steering outer product a_r(angle) a_t(angle)^H from the link geometry; the
    scattered part has unit-variance complex Gaussian entries. Entry power
    averages ref_gain / distance^2; an infinite Rician factor keeps only the
    deterministic part.
    """
    mu_pos = np.asarray(mu_pos, dtype=np.float64)
    uav_pos = np.asarray(uav_pos, dtype=np.float64)
    d2 = float(np.sum((uav_pos - mu_pos) ** 2) + cfg.altitude ** 2)
    d = math.sqrt(d2)
    angle = elevation_angle(math.sqrt(max(d2 - cfg.altitude ** 2, 0.0)), cfg.altitude)
    los = np.outer(steering_vector(angle, cfg.rx_antennas),
                   steering_vector(angle, cfg.tx_antennas).conj())
    eps = cfg.rician_factor
    if math.isinf(eps):
        w_los, w_nlos = 1.0, 0.0
    else:
        w_los = math.sqrt(eps / (eps + 1.0))
        w_nlos = math.sqrt(1.0 / (eps + 1.0))
    shape = (cfg.rx_antennas, cfg.tx_antennas)
    scatter = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    h = math.sqrt(cfg.ref_gain / d2) * (w_los * los + w_nlos * scatter)
    return h, d


def build_all_channels(world: WorldState, cfg: ScenarioConfig,
                       rng: np.random.Generator) -> np.ndarray:
    """Vectorized channel draw for every MU-UAV pair: complex [K, M, W_R, W_T]."""
    mu_pos = world.mu_positions()            # [K, 2]
    uav_pos = world.uav_positions()          # [M, 2]
    diff = uav_pos[None, :, :] - mu_pos[:, None, :]
    horiz2 = np.sum(diff * diff, axis=-1)                    # [K, M]
    d2 = horiz2 + cfg.altitude ** 2
    angle = np.arctan2(cfg.altitude, np.sqrt(horiz2))        # [K, M]
    sin_a = np.sin(angle)
    a_r = np.exp(1j * np.pi * sin_a[..., None] * np.arange(cfg.rx_antennas))
    a_t = np.exp(1j * np.pi * sin_a[..., None] * np.arange(cfg.tx_antennas))
    los = a_r[..., :, None] * a_t[..., None, :].conj()       # [K, M, W_R, W_T]
    eps = cfg.rician_factor
    if math.isinf(eps):
        w_los, w_nlos = 1.0, 0.0
    else:
        w_los = math.sqrt(eps / (eps + 1.0))
        w_nlos = math.sqrt(1.0 / (eps + 1.0))
    shape = los.shape
    scatter = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    scale = np.sqrt(cfg.ref_gain / d2)[..., None, None]
    return scale * (w_los * los + w_nlos * scatter)


@dataclass
class RadarState:
    """Sensing-side quantities of one UAV for one slot."""

    beamformer: np.ndarray        # W_m, transmit beam with ||W||^2 = P
    receive_filter: np.ndarray    # c_m, unit norm
    target_response: np.ndarray   # doppler_phase * a(angle) a(angle)^H
    clutter_gain: complex         # summed coupling from other UAVs
    covariance: np.ndarray        # clutter-plus-noise R_m
    sinr: float
    rate: float                   # estimation information rate, bps


def _solve_hpd(mat: np.ndarray, rhs: np.ndarray, cfg: ScenarioConfig) -> tuple[np.ndarray, bool]:
    """Solve against a Hermitian positive definite matrix with a loading fallback."""
    try:
        return np.linalg.solve(mat, rhs), False
    except np.linalg.LinAlgError:
        loaded = mat + cfg.noise_power * 1e-6 * np.eye(mat.shape[0])
        return np.linalg.solve(loaded, rhs), True


def radar_geometry(uav: UavState, cfg: ScenarioConfig) -> float:
    """Elevation angle from the UAV down to its sensing target."""
    horiz = float(np.linalg.norm(uav.position - uav.target_position))
    return elevation_angle(horiz, cfg.altitude)


def build_radar_state(uav: UavState, cfg: ScenarioConfig) -> tuple[RadarState, bool]:
    """Steer the sensing beam, derive the max-SINR filter, and score the echo."""
    n = cfg.rx_antennas
    angle = radar_geometry(uav, cfg)
    a = steering_vector(angle, n)
    w = math.sqrt(cfg.uav_power_max) * a / np.linalg.norm(a)
    response = uav.doppler_phase * np.outer(a, a.conj())
    clutter = uav.clutter_gain
    cov = (abs(clutter) ** 2) * np.outer(w, w.conj()) + cfg.noise_power * np.eye(n)
    cov = 0.5 * (cov + cov.conj().T)
    steer = response @ w
    filt, loaded = _solve_hpd(cov, steer, cfg)
    norm = np.linalg.norm(filt)
    filt = filt / norm if norm > 0 else np.ones(n, dtype=complex) / math.sqrt(n)
    sinr, rate = radar_rate_from_filter(filt, response, w, cov, cfg)
    state = RadarState(beamformer=w, receive_filter=filt, target_response=response,
                       clutter_gain=clutter, covariance=cov, sinr=sinr, rate=rate)
    return state, loaded


def radar_rate_from_filter(filt: np.ndarray, response: np.ndarray, beam: np.ndarray,
                           cov: np.ndarray, cfg: ScenarioConfig) -> tuple[float, float]:
    signal = abs(np.vdot(filt, response @ beam)) ** 2
    noise = float(np.real(np.vdot(filt, cov @ filt)))
    sinr = signal / noise if noise > 0 else 0.0
    return sinr, radar_rate(sinr, cfg)


def radar_rate(sinr: float, cfg: ScenarioConfig) -> float:
    """Estimation information rate: duty/(2*pulse) * log2(1 + 2*B*mu*gamma)."""
    gain = 2.0 * cfg.bandwidth_hz * cfg.radar_gain_product * sinr
    return cfg.radar_duty / (2.0 * cfg.radar_pulse_s) * math.log2(1.0 + gain)


@dataclass
class LinkState:
    """Uplink quantities for one served MU-UAV pair."""

    mu_index: int
    uav_index: int
    channel: np.ndarray           # [W_R, W_T]
    distance: float
    beamformer: np.ndarray        # receive combiner, unit norm
    noise_cov: np.ndarray         # interference-plus-noise at the array
    signal_power: float           # P * ||H^H w||^2
    rate: float                   # bits/s


def radar_leakage(radar: RadarState, n: int) -> np.ndarray:
    """Covariance of the sensing waveform as seen by the uplink receiver."""
    g = radar.target_response + radar.clutter_gain * np.eye(n)
    leaked = g @ radar.beamformer
    return np.outer(leaked, leaked.conj())


def interference_covariance(world: WorldState, alloc: Allocation, radars: list,
                            cfg: ScenarioConfig, uav_index: int,
                            exclude_mu: int | None = None) -> np.ndarray:
    """Inter-MU plus radar-leakage plus noise covariance at one UAV's array."""
    n = cfg.rx_antennas
    cov = cfg.noise_power * np.eye(n, dtype=complex)
    cov = cov + radar_leakage(radars[uav_index], n)
    active = np.flatnonzero(alloc.association.sum(axis=1) > 0)
    for i in active:
        if exclude_mu is not None and i == exclude_mu:
            continue
        h = world.channels[i, uav_index]
        cov = cov + cfg.mu_power_max * (h @ h.conj().T)
    return 0.5 * (cov + cov.conj().T)


def mmse_beamformer(channel: np.ndarray, noise_cov: np.ndarray,
                    cfg: ScenarioConfig) -> tuple[np.ndarray, bool]:
    """Unit-norm combiner: noise_cov^-1 H u1 along the channel's principal direction."""
    _, _, vh = np.linalg.svd(channel)
    principal = channel @ vh[0].conj()
    w, loaded = _solve_hpd(noise_cov, principal, cfg)
    norm = np.linalg.norm(w)
    if norm == 0:
        w = principal / np.linalg.norm(principal)
    else:
        w = w / norm
    return w, loaded


def comm_rate(channel: np.ndarray, beamformer: np.ndarray, noise_cov: np.ndarray,
              power: float, cfg: ScenarioConfig) -> tuple[float, float]:
    """Achievable uplink rate in bits/s.

    The scalar received signal power P ||H^H w||^2 rides on the inverse of the
    interference-plus-noise covariance: rate = B * sum_i log2(1 + s / lambda_i)
    over the covariance eigenvalues, which is log2 det(I + s N^-1).
    """
    if not np.all(np.isfinite(channel)):
        raise ValueError("channel contains non-finite entries")
    s = power * float(np.real(np.vdot(channel.conj().T @ beamformer,
                                      channel.conj().T @ beamformer)))
    lam = np.linalg.eigvalsh(noise_cov)
    lam = np.maximum(lam, np.finfo(float).tiny)
    rate = cfg.bandwidth_hz * float(np.sum(np.log2(1.0 + s / lam)))
    return max(rate, 0.0), s


def design_links(world: WorldState, alloc: Allocation, radars: list,
                 cfg: ScenarioConfig) -> tuple[dict, bool]:
    """MMSE combiner and rate for every associated MU. Keys are MU indices."""
    links: dict[int, LinkState] = {}
    loaded_any = False
    mu_pos = world.mu_positions()
    uav_pos = world.uav_positions()
    for m in range(world.num_uavs):
        served = alloc.served_by(m)
        if served.size == 0:
            continue
        total = interference_covariance(world, alloc, radars, cfg, m)
        for k in served:
            h = world.channels[k, m]
            own = cfg.mu_power_max * (h @ h.conj().T)
            n_cov = total - own
            n_cov = 0.5 * (n_cov + n_cov.conj().T)
            w, loaded = mmse_beamformer(h, n_cov, cfg)
            loaded_any = loaded_any or loaded
            rate, s = comm_rate(h, w, n_cov, cfg.mu_power_max, cfg)
            d = math.sqrt(float(np.sum((uav_pos[m] - mu_pos[k]) ** 2)) + cfg.altitude ** 2)
            links[int(k)] = LinkState(mu_index=int(k), uav_index=m, channel=h,
                                      distance=d, beamformer=w, noise_cov=n_cov,
                                      signal_power=s, rate=rate)
    return links, loaded_any
