"""Beam-domain model: structure, normalization, equivalence to the antenna domain."""
import math

import numpy as np
import pytest

from beamchan.bdcm import (
    BeamDomainChannel,
    assemble_antenna_domain,
    bdcm_cluster_matrix,
    bdcm_matrix,
    beam_domain_entries,
    beam_doppler,
    beam_weights,
    center_los_doppler,
    draw_bdcm_phases,
    los_beam_index,
    response_entry_rx,
    response_entry_tx,
    response_matrix_rx,
    response_matrix_tx,
)
from beamchan.clusters import initial_clusters
from beamchan.config import SimulationConfig
from beamchan.gbsm import PhaseDraw, cluster_ellipse, gbsm_coefficient
from beamchan.geometry import (
    ArrayConfig,
    EllipseConfig,
    VirtualAngleGrid,
    antenna_offset,
    rx_focal_distance,
)

TWO_PI = 2.0 * math.pi


def small_config(**kw):
    kw.setdefault("array", ArrayConfig(num_tx=3, num_rx=4,
                                       spacing_tx=0.06, spacing_rx=0.06))
    kw.setdefault("num_beams", 16)
    return SimulationConfig(**kw)


def test_response_entries_unit_modulus():
    cfg = small_config()
    ell = cfg.ellipse
    grid = VirtualAngleGrid.build(cfg.num_beams, ell)
    u_t = response_matrix_tx(grid, ell, cfg.array, cfg.wavelength)
    u_r = response_matrix_rx(grid, ell, cfg.array, cfg.wavelength)
    assert u_t.entries.shape == (3, 16)
    assert u_r.entries.shape == (4, 16)
    assert np.max(np.abs(np.abs(u_t.entries) - 1.0)) < 1e-12
    assert np.max(np.abs(np.abs(u_r.entries) - 1.0)) < 1e-12


def test_response_entry_against_cartesian_oracle():
    # receive side, computed from explicit coordinates: scatterer on the
    # ellipse at the beam angle, antenna displaced along the tilted axis
    ell = EllipseConfig(semi_major=100.0, focal_half=80.0)
    arr = ArrayConfig(num_tx=3, num_rx=4, spacing_tx=0.06, spacing_rx=0.05)
    grid = VirtualAngleGrid.build(8, ell)
    m, k = 3, 1
    theta = grid.aoa[m - 1]
    d = rx_focal_distance(theta, ell)
    scat = np.array([80.0 + d * math.cos(theta), d * math.sin(theta)])
    off = antenna_offset(k, 4, 0.05)
    ant = np.array([80.0 + off * math.cos(arr.tilt_rx),
                    off * math.sin(arr.tilt_rx)])
    dist = math.hypot(*(scat - ant))
    want = TWO_PI / 0.12 * (dist - d)
    got = response_entry_rx(k, m, grid, ell, arr, 0.12)
    assert math.remainder(math.atan2(got.imag, got.real) - want, TWO_PI) == \
        pytest.approx(0.0, abs=1e-9)
    # transmit side carries the opposite sign convention
    got_t = response_entry_tx(2, m, grid, ell, arr, 0.12)
    d_t = 2.0 * ell.semi_major - d
    off_t = antenna_offset(2, 3, 0.06)
    ant_t = np.array([-80.0 + off_t * math.cos(arr.tilt_tx),
                      off_t * math.sin(arr.tilt_tx)])
    dist_t = math.hypot(*(scat - ant_t))
    want_t = TWO_PI / 0.12 * (d_t - dist_t)
    assert math.remainder(math.atan2(got_t.imag, got_t.real) - want_t, TWO_PI) == \
        pytest.approx(0.0, abs=1e-9)


def test_beam_weights_sum_and_peak():
    cfg = small_config()
    grid = VirtualAngleGrid.build(64, cfg.ellipse)
    w = beam_weights(1.0, 5.0, grid, "von_mises")
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    peak = grid.aoa[int(np.argmax(w))]
    assert abs(peak - 1.0) <= TWO_PI / 64
    u = beam_weights(1.0, 5.0, grid, "uniform")
    assert np.allclose(u, 1.0 / 64)
    with pytest.raises(ValueError):
        beam_weights(0.0, 1.0, grid, "boxcar")


def test_beam_diagonal_power_and_modulus():
    cfg = small_config(rician_k=0.0)
    rng = np.random.default_rng(5)
    clusters = initial_clusters(cfg, rng)
    phases = draw_bdcm_phases(clusters, cfg, rng)
    for c in clusters[:3]:
        bd = beam_domain_entries(c, 0.4, cfg, phases)
        assert np.sum(np.abs(bd.nlos_diag) ** 2) == pytest.approx(c.power, rel=1e-12)
        assert np.all(bd.los_diag == 0)


def test_direct_beam_single_entry():
    cfg = small_config(rician_k=4.0)
    rng = np.random.default_rng(6)
    clusters = initial_clusters(cfg, rng)
    phases = draw_bdcm_phases(clusters, cfg, rng)
    bd = beam_domain_entries(clusters[0], 0.0, cfg, phases)
    nz = np.nonzero(bd.los_diag)[0]
    assert len(nz) == 1
    m0 = los_beam_index(bd.grid)
    assert nz[0] == m0 - 1
    assert abs(bd.los_diag[m0 - 1]) == pytest.approx(math.sqrt(4.0 / 5.0), rel=1e-12)
    # the direct-path beam points back at the transmitter
    assert bd.grid.aoa[m0 - 1] == pytest.approx(math.pi, abs=1e-12)


def test_center_doppler_value():
    cfg = SimulationConfig()
    # broadside arrays and velocity at pi/6 from the axis
    assert center_los_doppler(cfg) == pytest.approx(
        cfg.max_doppler * math.cos(cfg.velocity_angle), rel=1e-12)
    grid = VirtualAngleGrid.build(8, cfg.ellipse)
    f = beam_doppler(3, grid, cfg)
    assert f == pytest.approx(
        cfg.max_doppler * math.cos(grid.aoa[2] - cfg.velocity_angle), rel=1e-12)


def test_assembly_matches_triple_loop_oracle():
    # U_R diag U_T^H written out elementwise, many random small setups
    rng = np.random.default_rng(42)
    for _ in range(100):
        mr = int(rng.integers(1, 5))
        mt = int(rng.integers(1, 5))
        m = int(rng.integers(1, 12))
        u_r = np.exp(1j * rng.uniform(-math.pi, math.pi, (mr, m)))
        u_t = np.exp(1j * rng.uniform(-math.pi, math.pi, (mt, m)))
        diag_l = np.zeros(m, complex)
        diag_l[int(rng.integers(0, m))] = rng.normal() + 1j * rng.normal()
        diag_n = rng.normal(size=m) + 1j * rng.normal(size=m)
        bd = BeamDomainChannel(los_diag=diag_l, nlos_diag=diag_n, grid=None,
                               delay=0.0, cluster_uid=0)
        from beamchan.bdcm import ResponseMatrix
        got = assemble_antenna_domain(bd, ResponseMatrix(u_r, "receive"),
                                      ResponseMatrix(u_t, "transmit"))
        want = np.zeros((mr, mt), complex)
        for k in range(mr):
            for l in range(mt):
                for b in range(m):
                    want[k, l] += u_r[k, b] * (diag_l[b] + diag_n[b]) * np.conj(u_t[l, b])
        assert np.max(np.abs(got - want)) < 1e-12


def test_assembly_dimension_check():
    bd = BeamDomainChannel(los_diag=np.zeros(4, complex),
                           nlos_diag=np.zeros(4, complex), grid=None,
                           delay=0.0, cluster_uid=0)
    from beamchan.bdcm import ResponseMatrix
    with pytest.raises(ValueError):
        assemble_antenna_domain(bd, ResponseMatrix(np.ones((2, 3), complex), "receive"),
                                ResponseMatrix(np.ones((2, 4), complex), "transmit"))


def test_single_beam_telescopes_to_ray_phase():
    # a cluster with one ray exactly at a grid angle: the assembled
    # single-beam entry and the antenna-domain ray coefficient carry the
    # same phase, and the magnitudes differ only by the beam weight
    cfg = small_config(rician_k=0.0, num_beams=16)
    rng = np.random.default_rng(10)
    clusters = initial_clusters(cfg, rng)
    base = clusters[0]
    ell = cluster_ellipse(base, cfg)
    grid = VirtualAngleGrid.build(cfg.num_beams, ell)
    for m in (1, 5, 11, 16):
        theta = grid.aoa[m - 1]
        base.ray_aoas = np.array([theta])
        base.mean_aoa = float(theta)
        base.visible_tx = frozenset(range(1, cfg.array.num_tx + 1))
        base.visible_rx = frozenset(range(1, cfg.array.num_rx + 1))
        phi0 = 0.4321
        t = 0.37
        hg = gbsm_coefficient(2, 3, base, t, cfg,
                              phases=PhaseDraw(nlos={base.uid: np.array([phi0])}, los=0.0))
        pb = PhaseDraw(nlos={base.uid: np.full(cfg.num_beams, phi0)}, los=0.0)
        bd = beam_domain_entries(base, t, cfg, pb, grid)
        only = np.zeros_like(bd.nlos_diag)
        only[m - 1] = bd.nlos_diag[m - 1]
        one = BeamDomainChannel(los_diag=np.zeros_like(only), nlos_diag=only,
                                grid=grid, delay=bd.delay, cluster_uid=base.uid)
        u_t = response_matrix_tx(grid, ell, cfg.array, cfg.wavelength)
        u_r = response_matrix_rx(grid, ell, cfg.array, cfg.wavelength)
        hb = assemble_antenna_domain(one, u_r, u_t)[1, 2]
        wm = beam_weights(base.mean_aoa, cfg.kappa, grid, cfg.beam_weighting)[m - 1]
        assert abs(hb) / math.sqrt(wm) == pytest.approx(abs(hg), rel=1e-10)
        dphi = math.remainder(np.angle(hb) - np.angle(hg), TWO_PI)
        assert abs(dphi) < 1e-9


def test_cluster_matrix_visibility_gating():
    cfg = small_config(rician_k=0.0)
    rng = np.random.default_rng(13)
    clusters = initial_clusters(cfg, rng)
    c = clusters[0]
    c.visible_rx = frozenset({2, 4})
    c.visible_tx = frozenset({1})
    phases = draw_bdcm_phases(clusters, cfg, rng)
    mat = bdcm_cluster_matrix(c, 0.2, cfg, phases)
    assert mat.shape == (4, 3)
    assert np.all(mat[0, :] == 0) and np.all(mat[2, :] == 0)
    assert np.all(mat[:, 1:] == 0)
    assert mat[1, 0] != 0 and mat[3, 0] != 0


def test_full_matrix_and_phase_requirements():
    cfg = small_config()
    rng = np.random.default_rng(14)
    clusters = initial_clusters(cfg, rng)
    real = bdcm_matrix(0.3, clusters, cfg, rng=np.random.default_rng(15))
    assert real.coeffs.shape == (4, 3, len(clusters))
    assert real.model == "bdcm"
    with pytest.raises(ValueError):
        bdcm_matrix(0.3, clusters, cfg)
