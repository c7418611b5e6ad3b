import math

import numpy as np
import pytest

import pebble


def logistic_data(n=150, seed=3):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 2))
    prob = 1.0 / (1.0 + np.exp(-(x @ np.array([1.0, -0.5]))))
    y = (rng.uniform(size=n) < prob).astype(float)
    return x, y


def test_fit_closed_form():
    res = pebble.fit(np.ones((4, 1)), [1, 1, 1, 0])
    assert res["beta_hat"][0] == pytest.approx(math.log(3.0), abs=1e-9)
    assert res["final_score_norm"] <= 1e-10


def test_fit_matches_numpy_newton():
    x, y = logistic_data()
    beta = np.zeros(2)
    for _ in range(50):
        p = 1.0 / (1.0 + np.exp(-x @ beta))
        beta += np.linalg.solve(x.T @ (x * (p * (1 - p))[:, None]), x.T @ (y - p))
    assert np.allclose(pebble.fit(x, y)["beta_hat"], beta, atol=1e-8)


def test_ci_is_deterministic_and_brackets_estimate():
    x, y = logistic_data()
    a = pebble.ci(x, y, boot=200, seed=7)
    b = pebble.ci(x, y, boot=200, seed="0x7", threads=2)
    assert a == b
    for est, item in zip(a["beta_hat"], a["intervals"]):
        lo, hi = item["two_sided"]
        assert lo <= hi
        assert lo - 1.0 < est < hi + 1.0


def test_region_far_point_excluded():
    x, y = logistic_data()
    assert not pebble.region(x, y, [50.0, -50.0], boot=150)["contains"]


def test_simulate_schema():
    rep = pebble.simulate(n=60, p=2, reps=2, boot=100, seed=5)
    assert [m["method"] for m in rep["methods"]] == ["PEBBLE", "Normal"]
    assert rep["experiments_used"] + rep["failed_experiments"] == 2


def test_helpers():
    assert pebble.default_bn(200, 2) == pytest.approx(200 ** -0.1, rel=1e-12)
    assert pebble.quantile(list(range(1, 101)), 0.9) == 90
    w = pebble.sample_weights(1, 1000)
    assert w.shape == (1000,) and (w >= 0).all() and (w <= 1).all()


def test_errors_surface_as_pebble_error(tmp_path):
    with pytest.raises(pebble.PebbleError, match="Separation"):
        pebble.fit(np.array([[-2.0], [-1.0], [1.0], [2.0]]), [0, 0, 1, 1])
    with pytest.raises(pebble.PebbleError, match="Precondition"):
        pebble.ci(*logistic_data(), boot=50)
    path = tmp_path / "d.csv"
    path.write_text("a,y\n1,1\n2,0\n3,1\n")
    x, y, names = pebble.load_csv(path, "y", intercept=True)
    assert names == ["_intercept", "a"] and x.shape == (3, 2)
    with pytest.raises(pebble.PebbleError, match="MissingColumn"):
        pebble.load_csv(path, "z")
