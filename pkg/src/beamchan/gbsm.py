"""Antenna-domain channel model: per-ray spherical-wavefront sums.

Each visible cluster contributes an equal-gain sum of S rays.  A ray at
arrival angle theta leaves the transmitter under the matching ellipse
departure angle, and its phase is the exact path length from transmit
antenna l to the scatterer to receive antenna k, so spherical-wavefront
curvature across the arrays is kept in full.  Cluster 1 additionally
carries the direct path scaled by the Rician factor.  Coefficients for
clusters outside the joint visibility set are exactly zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clusters import Cluster
from .geometry import (
    EllipseConfig,
    antenna_distance_rx,
    antenna_distance_tx,
    aod_from_aoa,
    los_doppler,
    los_geometry,
    rx_focal_distance,
)

__all__ = [
    "ChannelRealization",
    "PhaseDraw",
    "cluster_ellipse",
    "ray_doppler",
    "ray_geometry_phase",
    "draw_gbsm_phases",
    "gbsm_coefficient",
    "gbsm_cluster_matrix",
    "gbsm_matrix",
]

TWO_PI = 2.0 * math.pi


@dataclass
class ChannelRealization:
    """Per-cluster coefficient tensor at one time instant."""

    coeffs: np.ndarray = field(repr=False)  # (num_rx, num_tx, num_clusters)
    delays: np.ndarray = field(repr=False)  # (num_clusters,)
    time: float = 0.0
    model: str = "gbsm"

    def transfer(self, k: int, l: int, freq: float) -> complex:
        """Frequency response at receive antenna k, transmit antenna l."""
        row = self.coeffs[k - 1, l - 1, :]
        return complex(np.sum(row * np.exp(-1j * TWO_PI * freq * self.delays)))


@dataclass
class PhaseDraw:
    """Initial phases of one realization: per cluster uid, plus the LOS one."""

    nlos: dict
    los: float


def cluster_ellipse(cluster: Cluster, config) -> EllipseConfig:
    return EllipseConfig(cluster.semi_major, config.ellipse.focal_half)


def ray_doppler(aoas, config):
    """Doppler shift of rays arriving from ``aoas``."""
    return config.max_doppler * np.cos(np.asarray(aoas) - config.velocity_angle)


def _ray_center_geometry(cluster: Cluster, config):
    """Arrival/departure angles and center distances of the cluster rays."""
    ellipse = cluster_ellipse(cluster, config)
    aoas = cluster.ray_aoas
    aods = aod_from_aoa(aoas, ellipse)
    d_rx = rx_focal_distance(aoas, ellipse)
    d_tx = 2.0 * ellipse.semi_major - d_rx
    return aoas, aods, d_tx, d_rx


def ray_geometry_phase(cluster: Cluster, k: int, l: int, config):
    """Per-ray propagation phase (2 pi / lambda)(D_l^T + D_k^R)."""
    aoas, aods, d_tx, d_rx = _ray_center_geometry(cluster, config)
    dist_t = antenna_distance_tx(d_tx, aods, l, config.array)
    dist_r = antenna_distance_rx(d_rx, aoas, k, config.array)
    return TWO_PI / config.wavelength * (dist_t + dist_r)


def draw_gbsm_phases(clusters, rng) -> PhaseDraw:
    """One uniform initial phase per ray per cluster, shared across antennas."""
    nlos = {c.uid: rng.uniform(0.0, TWO_PI, len(c.ray_aoas)) for c in clusters}
    return PhaseDraw(nlos=nlos, los=float(rng.uniform(0.0, TWO_PI)))


def _is_visible(cluster: Cluster, k: int, l: int) -> bool:
    return l in cluster.visible_tx and k in cluster.visible_rx


def gbsm_coefficient(k: int, l: int, cluster: Cluster, t: float, config,
                     phases: PhaseDraw | None = None, rng=None) -> complex:
    """Channel coefficient of one cluster between antennas (k, l) at time t.

    ``phases`` carries the realization's initial phases; when omitted they
    are drawn from ``rng``.  Returns exactly 0 when the cluster is not in
    the joint visibility set of the two antennas.
    """
    if not _is_visible(cluster, k, l):
        return 0j
    if phases is None:
        if rng is None:
            raise ValueError("either phases or rng must be given")
        phases = draw_gbsm_phases([cluster], rng)
    kfac = config.rician_k
    psi = ray_geometry_phase(cluster, k, l, config)
    freq = ray_doppler(cluster.ray_aoas, config)
    rays = np.exp(1j * (TWO_PI * freq * t + phases.nlos[cluster.uid] + psi))
    value = math.sqrt(cluster.power / ((kfac + 1.0) * len(rays))) * np.sum(rays)
    if cluster.index == 1 and kfac > 0:
        f_los = los_doppler(l, k, config.ellipse, config.array,
                            config.max_doppler, config.velocity_angle)
        _, _, dist_kl = los_geometry(l, k, config.ellipse, config.array)
        phase = TWO_PI * f_los * t + phases.los + TWO_PI / config.wavelength * dist_kl
        value += math.sqrt(kfac / (kfac + 1.0)) * np.exp(1j * phase)
    return complex(value)


def gbsm_cluster_matrix(cluster: Cluster, t: float, config,
                        phases: PhaseDraw) -> np.ndarray:
    """All-antenna coefficient matrix of one cluster (vectorized)."""
    arr = config.array
    out = np.zeros((arr.num_rx, arr.num_tx), dtype=complex)
    vis_rx = sorted(cluster.visible_rx)
    vis_tx = sorted(cluster.visible_tx)
    if not vis_rx or not vis_tx:
        return out
    aoas, aods, d_tx, d_rx = _ray_center_geometry(cluster, config)
    dist_t = np.stack([antenna_distance_tx(d_tx, aods, l, arr) for l in vis_tx])
    dist_r = np.stack([antenna_distance_rx(d_rx, aoas, k, arr) for k in vis_rx])
    kfac = config.rician_k
    wavenum = TWO_PI / config.wavelength
    carrier = TWO_PI * ray_doppler(aoas, config) * t + phases.nlos[cluster.uid]
    # phase tensor over (rx, tx, ray)
    total = carrier[None, None, :] + wavenum * (
        dist_r[:, None, :] + dist_t[None, :, :]
    )
    block = math.sqrt(cluster.power / ((kfac + 1.0) * len(aoas))) * np.sum(
        np.exp(1j * total), axis=2
    )
    out[np.ix_([k - 1 for k in vis_rx], [l - 1 for l in vis_tx])] = block
    if cluster.index == 1 and kfac > 0:
        amp = math.sqrt(kfac / (kfac + 1.0))
        for k in vis_rx:
            for l in vis_tx:
                f_los = los_doppler(l, k, config.ellipse, arr,
                                    config.max_doppler, config.velocity_angle)
                _, _, dist_kl = los_geometry(l, k, config.ellipse, arr)
                out[k - 1, l - 1] += amp * np.exp(
                    1j * (TWO_PI * f_los * t + phases.los + wavenum * dist_kl)
                )
    return out


def gbsm_matrix(t: float, clusters, config, phases: PhaseDraw | None = None,
                rng=None) -> ChannelRealization:
    """Full (num_rx, num_tx, num_clusters) coefficient slice at time t."""
    if phases is None:
        if rng is None:
            raise ValueError("either phases or rng must be given")
        phases = draw_gbsm_phases(clusters, rng)
    arr = config.array
    coeffs = np.zeros((arr.num_rx, arr.num_tx, len(clusters)), dtype=complex)
    for i, c in enumerate(clusters):
        coeffs[:, :, i] = gbsm_cluster_matrix(c, t, config, phases)
    delays = np.array([c.delay for c in clusters])
    return ChannelRealization(coeffs=coeffs, delays=delays, time=t, model="gbsm")
