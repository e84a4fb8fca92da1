import math

import pytest

import timinghedge as th

BASE = th.BarrierContract(80.0, 90.0, 1.0, 0.6)
PARAMS = th.GbmParams(0.03, 0.2)


def test_normal_cdf():
    assert th.normal_cdf(0.0) == 0.5
    assert abs(th.normal_cdf(1.0) - 0.8413447460685429) < 1e-15


def test_he1_base_case():
    v = th.he1(BASE, PARAMS)
    first, second = th.he1_components(BASE, PARAMS)
    assert abs(v - (first - second)) < 1e-12
    assert abs(v - 0.1358393609761) < 1e-10


def test_he1_zero_drift():
    zd = th.GbmParams(0.5 * 0.2 * 0.2, 0.2)
    assert th.he1(BASE, zd) == 0.0


def test_he2_components_sum():
    r = th.he2(BASE, PARAMS)
    assert abs(sum(r["components"]) - r["total"]) < 1e-10
    assert abs(r["total"] - 0.0034298329703) < 1e-9


def test_ratio_and_benefit():
    g = th.ratio_gamma(BASE, PARAMS)
    assert 0.9 < 1.0 - abs(g) <= 1.0
    with pytest.raises(th.UndefinedRatioError):
        th.ratio_gamma(BASE, th.GbmParams(0.5 * 0.2 * 0.2, 0.2))


def test_carr_picron():
    res = th.carr_picron_residual(math.log(100.0), math.log(80.0), PARAMS, 1.0)
    assert abs(res) < 1e-8


def test_first_passage_cdf_monotone():
    prev = 0.0
    for s in [0.1, 0.3, 0.6, 1.0]:
        cur = th.first_passage_cdf(math.log(100.0), math.log(80.0), PARAMS, 1.0, s)
        assert cur >= prev
        prev = cur
    assert 0.2 < prev < 0.3


def test_mc_reproducibility():
    cfg = th.McConfig()
    cfg.n_paths = 50000
    cfg.antithetic = True
    cfg.seed = 7
    a = th.he1_mc(BASE, PARAMS, cfg)
    b = th.he1_mc(BASE, PARAMS, cfg)
    assert a.mean == b.mean
    assert abs(a.mean - th.he1(BASE, PARAMS)) < 3.0 * a.std_error


def test_sweep_surface_shape():
    s = th.sweep_surface("first", [85.0, 90.0, 95.0], [0.1, 0.2, 0.3])
    assert len(s["values"]) == 9
    assert s["values"][4] == th.he1(BASE, PARAMS)  # centre cell is the base case


def test_series_bound_decay():
    cq = th.series_bound_cq_constant_model(PARAMS, 1.0)
    b = [th.series_bound(cq, 0.05, 500.0, 1.0, n) for n in range(1, 9)]
    assert all(x > y for x, y in zip(b, b[1:]))


def test_parametrix_identity():
    res = th.parametrix_identity_residual(PARAMS, 0.5, math.log(80.0), math.log(80.0))
    assert abs(res) < 1e-6


def test_lamperti_identity_sigma():
    assert abs(th.lamperti_transform(lambda y: 1.0, 0.0, -5.0, 5.0, 2.0) - 2.0) < 1e-10
