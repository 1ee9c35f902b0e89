"""Operation-count formulas: exact values, structure, validation."""
import pytest

from beamchan.complexity import (
    ComplexityReport,
    complexity_sweep,
    ro_bdcm,
    ro_bdcm_split,
    ro_gbsm,
)


def test_antenna_domain_spot_value():
    # single antenna pair, 20 rays, 20 clusters
    assert ro_gbsm(1, 1, 20, 20) == 86518


def test_beam_domain_spot_value():
    assert ro_bdcm(1, 1, 20) == 14926


def test_independent_arithmetic_cross_check():
    # same formulas written out differently, big grid, exact match
    for mr in range(1, 11):
        for mt in range(1, 11):
            pairs = mr * mt
            want = 174 * pairs + 3 + 20 * (19 * (208 * pairs + 19) + 4) + 1
            assert ro_gbsm(mr, mt, 20, 20) == want
            for m in (20, 200, 400):
                want_b = 6 + (244 * (mr + mt) + 258) * m
                assert ro_bdcm(mr, mt, m) == want_b


def test_ten_by_ten_values():
    assert ro_gbsm(10, 10, 20, 20) == 7_928_704
    assert ro_bdcm(10, 10, 400) == 2_055_206


def test_split_identity():
    for mr, mt, m in [(1, 1, 20), (3, 7, 200), (10, 10, 400)]:
        los, nlos = ro_bdcm_split(mr, mt, m)
        assert los + nlos == ro_bdcm(mr, mt, m)
        assert los - nlos == 104 * m  # the direct part costs more per beam


def test_single_ray_collapse():
    # one ray per cluster: the per-ray bracket vanishes and only the
    # per-cluster constant remains
    n = 17
    assert ro_gbsm(2, 3, 1, n) == 174 * 6 + 3 + 4 * n + 1


def test_linearity_in_antenna_pairs():
    base = ro_gbsm(2, 5, 20, 20)
    double = ro_gbsm(4, 5, 20, 20)
    # the affine offset is the pair-independent part
    offset = 3 + 20 * (19 * 19 + 4) + 1
    assert double - offset == 2 * (base - offset)
    # the beam-domain count is additive, not multiplicative
    assert ro_bdcm(4, 5, 20) - ro_bdcm(2, 5, 20) == ro_bdcm(4, 1, 20) - ro_bdcm(2, 1, 20)


def test_monotonicity():
    assert ro_gbsm(2, 2, 20, 20) > ro_gbsm(1, 2, 20, 20)
    assert ro_gbsm(1, 1, 21, 20) > ro_gbsm(1, 1, 20, 20)
    assert ro_gbsm(1, 1, 20, 21) > ro_gbsm(1, 1, 20, 20)
    assert ro_bdcm(2, 1, 20) > ro_bdcm(1, 1, 20)
    assert ro_bdcm(1, 1, 21) > ro_bdcm(1, 1, 20)


def test_exact_integers_no_overflow():
    big = ro_gbsm(10_000, 10_000, 500, 1000)
    assert isinstance(big, int)
    assert big == 174 * 10**8 + 3 + 1000 * (499 * (208 * 10**8 + 19) + 4) + 1


def test_validation():
    with pytest.raises(ValueError):
        ro_gbsm(0, 1, 20, 20)
    with pytest.raises(ValueError):
        ro_gbsm(1, 1, 20, -2)
    with pytest.raises(ValueError):
        ro_bdcm(1, 0, 20)
    with pytest.raises(ValueError):
        complexity_sweep([], 20, 20, [20])
    with pytest.raises(ValueError):
        complexity_sweep([1], 20, 20, [])


def test_sweep_shape_and_contents():
    table = complexity_sweep(range(1, 11), 20, 20, [20, 200, 400])
    assert len(table) == 10 * 4
    gbsm_rows = [r for r in table if r.model == "gbsm"]
    bdcm_rows = [r for r in table if r.model == "bdcm"]
    assert len(gbsm_rows) == 10 and len(bdcm_rows) == 30
    assert all(isinstance(r, ComplexityReport) for r in table)
    assert all(r.ro_count > 0 for r in table)
    row = next(r for r in bdcm_rows if r.num_rx == 5 and r.beams == 200)
    assert row.ro_count == ro_bdcm(5, 5, 200)
