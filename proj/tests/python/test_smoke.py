import math

import numpy as np
import pytest

import mccvc


def test_kernel_values():
    assert mccvc.gaussian_kernel(0.0, 1.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert mccvc.gaussian_kernel(1.0, 1.0) == pytest.approx(0.24197072451914335, rel=1e-15)
    with pytest.raises(mccvc.InvalidArgument):
        mccvc.gaussian_kernel(0.0, 0.0)


def test_correntropy_is_error_kde():
    rng = np.random.default_rng(0)
    e = rng.normal(size=200).tolist()
    assert mccvc.empirical_correntropy(e, 0.7, 0.3) == mccvc.kernel_density_estimate(e, 0.3, 0.7)


def test_optimize_params_prefers_narrow_kernel_for_peaked_errors():
    e = [-0.03, -0.02, -0.01, 0.0, 0.01, 0.02, 0.03]
    choice = mccvc.optimize_params(e, [0.5, 5.0], [0.0])
    assert choice["sigma"] == 0.5
    median = mccvc.optimize_params([1.0, 2.0, 3.0, 100.0], [1.0], center_rule="median")
    assert median["center"] == 2.5


def test_fit_recovers_weights_under_shifted_noise():
    x, y = mccvc.generate_linear_data(np.array([1.0, 2.0]), 400, 2, 42)
    assert x.shape == (400, 2)
    fit = mccvc.fit_mcc_vc(x, y)
    assert fit["converged"]
    assert mccvc.rmse_weights(fit["beta"], np.array([1.0, 2.0])) < 0.2
    assert abs(fit["center"] - 3.0) < 0.5
    ols = mccvc.ridge_solve(x, y)
    assert mccvc.rmse_weights(ols, np.array([1.0, 2.0])) > mccvc.rmse_weights(fit["beta"], np.array([1.0, 2.0]))


def test_singleton_grid_matches_fixed_kernel():
    x, y = mccvc.generate_linear_data(np.array([1.0, 2.0]), 100, 1, 5)
    vc = mccvc.fit_mcc_vc(x, y, sigmas=[2.0], centers=[0.0])
    fixed = mccvc.fit_mcc(x, y, 2.0)
    assert np.array_equal(vc["beta"], fixed["beta"])
    assert vc["iterations"] == fixed["iterations"]


def test_elm_features_in_unit_interval():
    w, b = mccvc.init_elm(3, 20, 7)
    assert w.shape == (20, 3) and b.shape == (20,)
    h = mccvc.elm_features(w, b, np.random.default_rng(1).uniform(-2, 2, size=(30, 3)))
    assert h.shape == (30, 20)
    assert (h > 0).all() and (h < 1).all()


def test_noise_is_deterministic():
    assert mccvc.sample_noise(4, 50, 3) == mccvc.sample_noise(4, 50, 3)
    with pytest.raises(mccvc.InvalidArgument):
        mccvc.sample_noise(9, 5, 1)


def test_degenerate_weights_raise_numerical_error():
    x = np.ones((2, 1))
    y = np.array([1e3, -1e3])
    with pytest.raises(mccvc.NumericalError):
        mccvc.fit_mcc(x, y, 1.0, lambda_prime=0.0)


def test_synth_bench_report():
    report = mccvc.synth_bench(runs=2, cases=[2], methods=["mmse", "mcc-vc"], samples=100)
    assert report["config"]["runs"] == 2
    names = [m["method"] for m in report["cases"][0]["methods"]]
    assert names == ["mmse", "mcc-vc"]
    assert report == mccvc.synth_bench(runs=2, cases=[2], methods=["mmse", "mcc-vc"], samples=100)
