import cmath
import math

import pytest

import uavcov

SUBURBAN = {"lambda": 1e-7, "n_antennas": 4, "beta_db": -10}


def test_suburban_point():
    assert uavcov.coverage(SUBURBAN) == pytest.approx(0.99761, abs=5e-5)
    assert uavcov.coverage({**SUBURBAN, "n_antennas": 1}) == pytest.approx(0.79204, abs=5e-5)


def test_interference_limited_is_lambda_free():
    base = {"noise_dbm": None, "n_antennas": 1, "beta_db": 0}
    exact = uavcov.p_cov_interference_limited(1.0, 2.75)
    for lam in (1e-7, 1e-6, 1e-5):
        assert uavcov.coverage({**base, "lambda": lam}) == pytest.approx(exact, abs=1e-9)


def test_mc_matches_analytic():
    cfg = {"lambda": 1e-6, "noise_dbm": None, "n_antennas": 1, "beta_db": 0}
    est = uavcov.estimate_coverage(cfg, drops=20000, seed=3)
    assert est["ci_low"] <= est["mean"] <= est["ci_high"]
    assert abs(est["mean"] - uavcov.coverage(cfg)) < 5 * est["std_error"]


def test_cellfree_dominates():
    cfg = {**SUBURBAN, "lambda": 1e-6}
    assert uavcov.coverage_cellfree(cfg) >= uavcov.coverage(cfg)


def test_invert_laplace_callable():
    f = uavcov.invert_laplace(lambda s: 1 / (s + 1), 2.0)
    assert f == pytest.approx(math.exp(-2.0), rel=1e-8)
    g = uavcov.invert_laplace(lambda s: cmath.exp(-cmath.sqrt(s)), 1.0, method="euler")
    assert g == pytest.approx(math.exp(-0.25) / (2 * math.sqrt(math.pi)), rel=1e-6)


def test_sweep_rows_are_self_describing():
    rows = uavcov.sweep(SUBURBAN, "n_antennas", [1, 2, math.inf])
    assert [r["n_antennas"] for r in rows] == ["1", "2", "inf"]
    assert {"alpha", "ell", "power_mw", "noise_dbm", "c1", "c2", "scenario"} <= rows[0].keys()


def test_figure_schema():
    assert "fig2a" in uavcov.figure_ids()
    rows = uavcov.figure("fig2a")
    assert len(rows) == 18
    best = max(rows, key=lambda r: float(r["p_cov_analytic"]))
    assert 15 <= float(best["theta_bar_deg"]) <= 25


def test_errors_map_to_python_exceptions():
    with pytest.raises(uavcov.ConfigError):
        uavcov.coverage({"alpha": 1.5})
    with pytest.raises(ValueError):
        uavcov.coverage({"unknown_key": 1})


def test_selftest():
    assert all(ok for _, ok, _ in uavcov.selftest())
