"""Monte-Carlo correlation estimators for both channel models.

The four correlation functions (space, time, frequency, and the joint
space-time-frequency correlation) are estimated from independent
realizations of the cluster state: every ensemble member redraws the
cluster set, delays/powers, ray angles and the evolution history from
its own seeded substreams, and lag-dependent cluster survival is applied
through each cluster's stored exponential budgets, so a single member
yields a consistent curve over the whole lag grid.

Estimator modes
  analytic   integrate the initial ray/beam phases out in closed form;
             each member contributes its exact conditional correlation.
             Removes the dominant Monte-Carlo noise term and makes the
             two models directly comparable (default).
  sampled    draw the phases and correlate realized coefficients.

Normalization is E[num] / sqrt(E[|X|^2] E[|Y|^2]) ("standard"); the
per-member alternative E[num / (|X||Y|)] ("per_realization") is
available in sampled mode only, where single-realization magnitudes
exist.

Spacing lags respace the whole array: at receive lag d > 0 the reference
is antenna 1 and the probe antenna 2 of the array rebuilt with spacing
d, so the probed pair is d apart while both stay on the physical array
axis.  At d = 0 both sides sit on antenna 1 of the configured array and
the correlation is exactly one.  Time lags keep the cluster set drawn at
evaluation time t and kill clusters during the lag with their stored
survival budgets; clusters born during the lag carry independent phases
and average out of the numerator, so they are excluded throughout.

Seeding: member j, purpose p draws from SeedSequence(entropy=seed,
spawn_key=(j, p)).  Enlarging the ensemble never perturbs existing
members, and model choice does not enter the state streams, so paired
model comparisons see identical cluster histories.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bdcm import beam_weights, center_los_doppler
from .clusters import initial_clusters, evolve_time, time_decay_rate
from .config import SimulationConfig
from .gbsm import ChannelRealization, cluster_ellipse
from .geometry import (
    VirtualAngleGrid,
    antenna_offset,
    aod_from_aoa,
    los_doppler_from_offsets,
    los_path_from_offsets,
    rx_focal_distance,
    virtual_angles,
)

__all__ = [
    "CorrelationSeries",
    "transfer_function",
    "space_ccf",
    "time_acf",
    "fcf",
    "stfcf",
]

TWO_PI = 2.0 * math.pi

# members per worker chunk; fixed so that results do not depend on the
# worker count, only on the (seed, member) pairs
_CHUNK = 256

_STREAM_INIT = 0
_STREAM_EVOLVE = 1
_STREAM_BUDGET = 2
_STREAM_PHASE = 3


@dataclass(frozen=True)
class CorrelationSeries:
    """One estimated correlation curve."""

    lag_axis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    magnitude: np.ndarray = field(repr=False)
    std_error: np.ndarray = field(repr=False)
    ensemble: int = 0
    model: str = "gbsm"
    kind: str = "space_ccf"
    eval_time: float = 0.0


def transfer_function(realization: ChannelRealization, k: int, l: int,
                      freq: float, t: float | None = None) -> complex:
    """Delay-phased sum of the cluster coefficients at antenna pair (k, l)."""
    if t is not None and t != realization.time:
        raise ValueError("realization was generated at a different time")
    return realization.transfer(k, l, freq)


def _stream(seed: int, member: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(member, purpose)))


def _broadcast_lags(lag_tx, lag_rx, lag_freq, lag_time):
    arrays = [np.atleast_1d(np.asarray(a, dtype=float))
              for a in (lag_tx, lag_rx, lag_freq, lag_time)]
    return [a.astype(float) for a in np.broadcast_arrays(*arrays)]


def _member_state(config, seed, member, t):
    clusters = initial_clusters(config, _stream(seed, member, _STREAM_INIT))
    if t > 0 and config.evolution.death_rate > 0:
        clusters = evolve_time(clusters, t, config,
                               _stream(seed, member, _STREAM_EVOLVE))
    return clusters


def _side_offsets(count: int, spacing_cfg: float, deltas: np.ndarray):
    """Reference/probe antenna offsets per lag on one array side.

    A positive lag respaces the array to the lag and probes antennas 1
    and 2; a zero lag keeps both on antenna 1 at the configured spacing,
    which makes the zero-lag correlation exact.
    """
    base = (count - 1) / 2.0
    off_cfg = base * spacing_cfg
    swept = deltas > 0
    off_x = np.where(swept, base * deltas, off_cfg)
    off_y = np.where(swept, (count - 3) / 2.0 * deltas, off_cfg)
    return off_x, off_y


def _pair_distances(center, angles, tilt, off_x, off_y):
    """Exact antenna-to-scatterer distances for both probe offsets.

    center/angles are (A,) per ray or beam, offsets (L,) per lag; the
    result is a pair of (A, L) arrays.
    """
    ca = np.cos(angles - tilt)[:, None]
    c = np.asarray(center, dtype=float)[:, None]
    dx = np.sqrt(c * c + off_x * off_x - 2.0 * c * off_x * ca)
    dy = np.sqrt(c * c + off_y * off_y - 2.0 * c * off_y * ca)
    return dx, dy


def _pair_gate(chain, hazard: np.ndarray) -> np.ndarray:
    """Survival of the probe antenna on one side, per lag."""
    if hazard.size == 0 or not np.any(hazard > 0):
        return np.ones(hazard.shape, dtype=bool)
    if len(chain) == 0:
        raise ValueError("spacing lag probes antenna 2 of a single-antenna array")
    return np.where(hazard > 0, chain[0] > hazard, True)


class _LagContext:
    """Precomputed per-call quantities shared by all ensemble members."""

    def __init__(self, config, model, lag_tx, lag_rx, lag_freq, lag_time):
        arr = config.array
        self.config = config
        self.model = model
        self.wn = TWO_PI / config.wavelength
        self.dT, self.dR, self.dW, self.dL = _broadcast_lags(
            lag_tx, lag_rx, lag_freq, lag_time)
        self.length = self.dT.size
        if np.any(self.dT > 0) and arr.num_tx < 2:
            raise ValueError("transmit spacing lag needs at least two transmit antennas")
        if np.any(self.dR > 0) and arr.num_rx < 2:
            raise ValueError("receive spacing lag needs at least two receive antennas")
        if np.any(self.dT < 0) or np.any(self.dR < 0):
            raise ValueError("spacing lags must be non-negative")
        self.off_tx = _side_offsets(arr.num_tx, arr.spacing_tx, self.dT)
        self.off_rx = _side_offsets(arr.num_rx, arr.spacing_rx, self.dR)
        hz = config.evolution.death_rate / config.evolution.array_decorrelation
        self.hazard_tx = hz * self.dT
        self.hazard_rx = hz * self.dR
        self.decay = time_decay_rate(config.evolution)
        self.kfac = config.rician_k
        # beam geometry is cluster-delay dependent; cache per delay slot
        self._beam_cache: dict[int, tuple] = {}
        self._angles = virtual_angles(config.num_beams) if model == "bdcm" else None
        # direct-path per-lag geometry is cluster independent
        if self.kfac > 0:
            self._los = self._los_terms()
        else:
            self._los = None

    def ray_geometry(self, occ):
        """(angles, weights, d_tx, d_rx, aod) for one cluster."""
        ell = cluster_ellipse(occ, self.config)
        if self.model == "gbsm":
            ang = occ.ray_aoas
            wts = np.full(ang.size, 1.0 / ang.size)
            d_rx = rx_focal_distance(ang, ell)
            aod = aod_from_aoa(ang, ell)
            return ang, wts, 2.0 * ell.semi_major - d_rx, d_rx, aod
        cached = self._beam_cache.get(occ.slot)
        if cached is None:
            d_rx = rx_focal_distance(self._angles, ell)
            grid = VirtualAngleGrid(num_beams=self.config.num_beams,
                                    aoa=self._angles,
                                    aod=aod_from_aoa(self._angles, ell))
            cached = (grid, 2.0 * ell.semi_major - d_rx, d_rx)
            self._beam_cache[occ.slot] = cached
        grid, d_tx, d_rx = cached
        wts = beam_weights(occ.mean_aoa, self.config.kappa, grid,
                           self.config.beam_weighting)
        return self._angles, wts, d_tx, d_rx, grid.aod

    def _los_terms(self):
        """Per-lag phase ingredients of the direct path.

        Returns (phase_x, phase_y, doppler_x, doppler_y): geometry phases
        and Doppler shifts of the reference and probe antenna pairs.
        """
        cfg = self.config
        arr = cfg.array
        otx_x, otx_y = self.off_tx
        orx_x, orx_y = self.off_rx
        if self.model == "gbsm":
            _, _, d_x = los_path_from_offsets(otx_x, orx_x, cfg.ellipse,
                                              arr.tilt_tx, arr.tilt_rx)
            _, _, d_y = los_path_from_offsets(otx_y, orx_y, cfg.ellipse,
                                              arr.tilt_tx, arr.tilt_rx)
            f_x = los_doppler_from_offsets(otx_x, orx_x, cfg.ellipse,
                                           arr.tilt_tx, arr.tilt_rx,
                                           cfg.max_doppler, cfg.velocity_angle)
            f_y = los_doppler_from_offsets(otx_y, orx_y, cfg.ellipse,
                                           arr.tilt_tx, arr.tilt_rx,
                                           cfg.max_doppler, cfg.velocity_angle)
            return self.wn * d_x, self.wn * d_y, f_x, f_y
        # beam-domain direct path: the wave is carried by the beam
        # pointing back at the transmitter, so the per-antenna phase uses
        # that beam's scatter point on the first cluster's ellipse
        ell = cfg.ellipse
        d_rx_c = np.array([ell.semi_major + ell.focal_half])
        d_tx_c = np.array([ell.semi_major - ell.focal_half])
        ang = np.array([math.pi])
        rx_x, rx_y = _pair_distances(d_rx_c, ang, arr.tilt_rx, orx_x, orx_y)
        # the departure angle of the beam at pi is pi as well
        tx_x, tx_y = _pair_distances(d_tx_c, ang, arr.tilt_tx, otx_x, otx_y)
        f_c = center_los_doppler(cfg)
        phase_x = self.wn * (rx_x[0] + tx_x[0])
        phase_y = self.wn * (rx_y[0] + tx_y[0])
        f = np.full(self.length, f_c)
        return phase_x, phase_y, f, f

    def los_phasors(self, t: float):
        """Reference/probe direct-path phases at evaluation time t."""
        phase_x, phase_y, f_x, f_y = self._los
        px = phase_x + TWO_PI * f_x * t
        py = phase_y + TWO_PI * f_y * (t + self.dL)
        return px, py, f_x, f_y


def _member_terms(ctx: _LagContext, clusters, budgets, t, cluster_index,
                  phase_rng=None):
    """One member's contribution (numerator, |X|^2 term, |Y|^2 term).

    In analytic mode the returned triple is the exact conditional
    expectation over initial phases; in sampled mode (phase_rng given)
    it is computed from one realized phase draw.
    """
    cfg = ctx.config
    arr = cfg.array
    if cluster_index is None:
        members = list(enumerate(clusters))
    else:
        if cluster_index > len(clusters):
            members = []
        else:
            members = [(cluster_index - 1, clusters[cluster_index - 1])]
    sampled = phase_rng is not None
    if sampled:
        x_tot = np.zeros(ctx.length, dtype=complex)
        y_tot = np.zeros(ctx.length, dtype=complex)
    else:
        v = np.zeros(ctx.length, dtype=complex)
        a = 0.0
        b = np.zeros(ctx.length)
    otx_x, otx_y = ctx.off_tx
    orx_x, orx_y = ctx.off_rx
    for pos, occ in members:
        ang, wts, d_tx_c, d_rx_c, aod = ctx.ray_geometry(occ)
        tx_x, tx_y = _pair_distances(d_tx_c, aod, arr.tilt_tx, otx_x, otx_y)
        rx_x, rx_y = _pair_distances(d_rx_c, ang, arr.tilt_rx, orx_x, orx_y)
        doppler = cfg.max_doppler * np.cos(ang - cfg.velocity_angle)
        gate = (_pair_gate(occ.tx_chain, ctx.hazard_tx)
                & _pair_gate(occ.rx_chain, ctx.hazard_rx)
                & (budgets[pos] > ctx.decay * ctx.dL))
        p_eff = occ.power / (ctx.kfac + 1.0)
        freq_fac = np.exp(1j * TWO_PI * ctx.dW * occ.delay)
        has_los = occ.index == 1 and ctx.kfac > 0
        if sampled:
            phases = phase_rng.uniform(0.0, TWO_PI, ang.size)
            amp = np.sqrt(p_eff * wts)
            ph_x = (ctx.wn * (tx_x + rx_x) + TWO_PI * doppler[:, None] * t
                    + phases[:, None])
            ph_y = (ctx.wn * (tx_y + rx_y)
                    + TWO_PI * doppler[:, None] * (t + ctx.dL)[None, :]
                    + phases[:, None])
            x_n = amp @ np.exp(1j * ph_x)
            y_n = (amp @ np.exp(1j * ph_y)) * gate * np.conj(freq_fac)
            if has_los:
                phi_l = phase_rng.uniform(0.0, TWO_PI)
                amp_l = math.sqrt(ctx.kfac / (ctx.kfac + 1.0))
                px, py, fx, fy = ctx.los_phasors(t)
                x_n = x_n + amp_l * np.exp(1j * (px + phi_l))
                y_n = y_n + amp_l * np.exp(1j * (py + phi_l)) * gate * np.conj(freq_fac)
            x_tot += x_n
            y_tot += y_n
        else:
            dphase = (ctx.wn * ((tx_x - tx_y) + (rx_x - rx_y))
                      - TWO_PI * doppler[:, None] * ctx.dL[None, :])
            pa = wts @ np.exp(1j * dphase)
            v += gate * pa * freq_fac * p_eff
            a += p_eff
            b = b + gate * p_eff
            if has_los:
                k_eff = ctx.kfac / (ctx.kfac + 1.0)
                px, py, fx, fy = ctx.los_phasors(t)
                v += gate * k_eff * np.exp(1j * (px - py)) * freq_fac
                a += k_eff
                b = b + gate * k_eff
    if sampled:
        return x_tot * np.conj(y_tot), np.abs(x_tot) ** 2, np.abs(y_tot) ** 2
    return v, a, b


def _accumulate(args):
    """Reduce one contiguous block of ensemble members."""
    (config, model, cluster_index, t, lag_tx, lag_rx, lag_freq, lag_time,
     seed, start, stop) = args
    ctx = _LagContext(config, model, lag_tx, lag_rx, lag_freq, lag_time)
    sampled = config.estimator_mode == "sampled"
    num = np.zeros(ctx.length, dtype=complex)
    sq = np.zeros(ctx.length)
    den_x = np.zeros(ctx.length)
    den_y = np.zeros(ctx.length)
    pr_num = np.zeros(ctx.length, dtype=complex)
    pr_sq = np.zeros(ctx.length)
    pr_cnt = np.zeros(ctx.length, dtype=np.int64)
    for member in range(start, stop):
        clusters = _member_state(config, seed, member, t)
        budgets = _stream(seed, member, _STREAM_BUDGET).exponential(
            size=max(len(clusters), 1))
        phase_rng = (_stream(seed, member, _STREAM_PHASE) if sampled else None)
        v, a, b = _member_terms(ctx, clusters, budgets, t, cluster_index,
                                phase_rng)
        num += v
        sq += np.abs(v) ** 2
        den_x = den_x + a
        den_y = den_y + b
        if sampled:
            ok = (a * b) > 0
            r = np.where(ok, v / np.sqrt(np.where(ok, a * b, 1.0)), 0.0)
            pr_num += r
            pr_sq += np.abs(r) ** 2
            pr_cnt += ok.astype(np.int64)
    return num, sq, den_x, den_y, pr_num, pr_sq, pr_cnt


def _worker_count() -> int:
    raw = os.environ.get("BEAMCHAN_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def _estimate(config: SimulationConfig, model, cluster_index, lag_tx, lag_rx,
              lag_freq, lag_time, t, ensemble, seed):
    if model not in ("gbsm", "bdcm"):
        raise ValueError(f"unknown model '{model}'")
    ensemble = int(config.ensemble if ensemble is None else ensemble)
    if ensemble < 1:
        raise ValueError("ensemble must be at least 1")
    seed = int(config.seed if seed is None else seed)
    if config.normalization == "per_realization" and config.estimator_mode != "sampled":
        raise ValueError("per_realization normalization needs estimator_mode='sampled'")
    blocks = [(config, model, cluster_index, t, lag_tx, lag_rx, lag_freq,
               lag_time, seed, s, min(s + _CHUNK, ensemble))
              for s in range(0, ensemble, _CHUNK)]
    workers = _worker_count()
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_accumulate, blocks))
    else:
        parts = [_accumulate(b) for b in blocks]
    num, sq, den_x, den_y, pr_num, pr_sq, pr_cnt = (
        sum(p[i] for p in parts) for i in range(7))
    if config.normalization == "per_realization":
        cnt = np.maximum(pr_cnt, 1)
        values = pr_num / cnt
        var = np.maximum(pr_sq / cnt - np.abs(values) ** 2, 0.0)
        err = np.sqrt(var / cnt)
        values = np.where(pr_cnt > 0, values, 0.0)
    else:
        scale = np.sqrt((den_x / ensemble) * (den_y / ensemble))
        safe = np.where(scale > 0, scale, 1.0)
        values = np.where(scale > 0, (num / ensemble) / safe, 0.0)
        var = np.maximum(sq / ensemble - np.abs(num / ensemble) ** 2, 0.0)
        err = np.sqrt(var / ensemble) / safe
    # at an all-zero lag the probe equals the reference, so numerator and
    # denominator are the same empirical mean and the ratio is 1 by
    # identity for any ensemble; pin it instead of round-tripping the
    # division through floating point
    dT, dR, dW, dL = _broadcast_lags(lag_tx, lag_rx, lag_freq, lag_time)
    zero = (dT == 0) & (dR == 0) & (dW == 0) & (dL == 0)
    values = np.where(zero, 1.0 + 0.0j, values)
    err = np.where(zero, 0.0, err)
    return values, err, ensemble, seed


def _make_series(config, model, kind, cluster_index, axis, lag_tx, lag_rx,
                 lag_freq, lag_time, t, ensemble, seed) -> CorrelationSeries:
    values, err, ensemble, _ = _estimate(config, model, cluster_index, lag_tx,
                                         lag_rx, lag_freq, lag_time, t,
                                         ensemble, seed)
    return CorrelationSeries(lag_axis=np.asarray(axis, dtype=float),
                             values=values, magnitude=np.abs(values),
                             std_error=err, ensemble=ensemble, model=model,
                             kind=kind, eval_time=float(t))


def space_ccf(config: SimulationConfig, model: str = "gbsm",
              cluster_index: int = 1, spacing_grid=None, t: float = 1.0,
              ensemble: int | None = None, seed: int | None = None
              ) -> CorrelationSeries:
    """Receive-spacing correlation of one cluster's coefficient."""
    if spacing_grid is None:
        spacing_grid = np.linspace(0.0, 3.0 * config.wavelength, 31)
    spacing_grid = np.asarray(spacing_grid, dtype=float)
    return _make_series(config, model, "space_ccf", cluster_index,
                        spacing_grid, 0.0, spacing_grid, 0.0, 0.0, t,
                        ensemble, seed)


def time_acf(config: SimulationConfig, model: str = "gbsm",
             cluster_index: int = 1, lag_grid=None, t: float = 1.0,
             ensemble: int | None = None, seed: int | None = None
             ) -> CorrelationSeries:
    """Time-lag correlation of one cluster's coefficient at instant t."""
    if lag_grid is None:
        lag_grid = np.linspace(0.0, 0.12, 25)
    lag_grid = np.asarray(lag_grid, dtype=float)
    return _make_series(config, model, "time_acf", cluster_index, lag_grid,
                        0.0, 0.0, 0.0, lag_grid, t, ensemble, seed)


def fcf(config: SimulationConfig, model: str = "gbsm", freq_lag_grid=None,
        t: float = 1.0, ensemble: int | None = None,
        seed: int | None = None) -> CorrelationSeries:
    """Frequency correlation of the full transfer function."""
    if freq_lag_grid is None:
        freq_lag_grid = np.linspace(0.0, 20e6, 41)
    freq_lag_grid = np.asarray(freq_lag_grid, dtype=float)
    return _make_series(config, model, "fcf", None, freq_lag_grid, 0.0, 0.0,
                        freq_lag_grid, 0.0, t, ensemble, seed)


def stfcf(config: SimulationConfig, model: str = "gbsm",
          spacing_tx: float = 0.0, spacing_rx: float = 0.0,
          freq_lag: float = 0.0, time_lag: float = 0.0,
          cluster_index: int | None = 1, t: float = 1.0,
          ensemble: int | None = None, seed: int | None = None) -> complex:
    """Joint space-time-frequency correlation at a single lag point.

    The dedicated single-axis estimators are exact restrictions of this
    one: fixing the other three lags at zero reproduces their values
    bit for bit under the same seed.
    """
    values, _, _, _ = _estimate(config, model, cluster_index,
                                np.array([spacing_tx]), np.array([spacing_rx]),
                                np.array([freq_lag]), np.array([time_lag]),
                                t, ensemble, seed)
    return complex(values[0])
