import os
from pathlib import Path

import numpy as np
import pytest

import fliu


def second_difference(m):
    d = np.zeros((m - 2, m))
    for i in range(m - 2):
        d[i, i : i + 3] = [1.0, -2.0, 1.0]
    return d.T @ d


@pytest.fixture
def problem():
    rng = np.random.default_rng(0)
    z = rng.standard_normal((30, 5))
    y = z @ rng.standard_normal(5) + 0.3 * rng.standard_normal(30)
    return fliu.Design(z, second_difference(5)), y


def test_fit_reductions(problem):
    design, y = problem
    ols = fliu.fit(design, y, "ols")
    assert ols["coef"].shape == (6,)
    near_ols = fliu.fit(design, y, "fliu", lam=0.5, d=1.0, alpha=0.3)
    assert np.allclose(near_ols["coef"], ols["coef"], rtol=1e-8, atol=1e-10)
    ridge = fliu.fit(design, y, "genridge", lam=0.5, alpha=0.3)
    assert np.array_equal(fliu.fit(design, y, "fliu", lam=0.5, d=0.0, alpha=0.3)["coef"], ridge["coef"])
    assert ols["params"]["lambda"] is None


def test_criteria_match_smoother(problem):
    design, y = problem
    h = fliu.smoother_matrix(design, "fliu", lam=0.2, d=-3.0, alpha=0.5)
    r = y - h @ y
    n = len(y)
    want = (r @ r / n) / (1 - np.trace(h) / n) ** 2
    assert fliu.gcv(design, y, "fliu", lam=0.2, d=-3.0, alpha=0.5) == pytest.approx(want, rel=1e-10)
    loo = np.sum((r / (1 - np.diag(h))) ** 2)
    assert fliu.press(design, y, "fliu", lam=0.2, d=-3.0, alpha=0.5) == pytest.approx(loo, rel=1e-10)


def test_tune_and_plug_in(problem):
    design, y = problem
    t = fliu.tune(design, y, "fliu")
    assert t["score"] <= t["coarse_score"] + 1e-12
    assert not t["degenerate"]
    p = fliu.plug_in_d(design, y, 0.5, 0.5)
    assert p["d_plug"] <= 1.0
    assert 0.0 <= p["d_proj"] <= 1.0


def test_degeneracy_when_underdetermined():
    rng = np.random.default_rng(1)
    design = fliu.Design(rng.standard_normal((8, 20)), second_difference(20))
    y = rng.standard_normal(8)
    r = fliu.degeneracy_check(design, y, 1.0, 0.5, list(np.linspace(-50, 0.9, 30)))
    assert r["full_row_rank"] and r["degenerate"]
    assert r["gcv_spread"] < 1e-10


def test_risk_coefficients():
    c = fliu.mse_coefficients(np.eye(2), np.eye(2), np.array([1.0, 0.0]), 1.0)
    assert c["c3"] == pytest.approx(0.25)
    assert c["d_opt"] == pytest.approx(-1.0 / 3.0)


def test_errors_carry_codes(problem):
    design, y = problem
    with pytest.raises(fliu.Error) as info:
        fliu.fit(design, y, "ridge")
    assert info.value.code == "InvalidParam"
    with pytest.raises(fliu.Error):
        fliu.fit(design, y, "lasso")


def test_curves_and_data():
    grid = np.linspace(0.5, 99.5, 100)
    rng = np.random.default_rng(2)
    curves = rng.standard_normal((12, 100))
    design = fliu.design_from_curves(list(grid), [curves], size=7)
    assert (design.n, design.m) == (12, 7)
    train, test = fliu.split_indices(35, "24/11", seed=10)
    assert len(train) == 24 and len(test) == 11

    data_dir = Path(os.environ.get("FLIU_DATA_DIR", Path(__file__).parents[2] / "data" / "canadian_weather"))
    data = fliu.load_dataset(data_dir / "temperature_daily.csv", data_dir / "precipitation_annual.csv")
    assert len(data["labels"]) == 35
    assert data["curves"][0].shape == (35, 365)
