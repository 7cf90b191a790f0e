"""Variable-center correntropy regression for linear-in-parameters models."""

import json

from ._mccvc import (
    DataError,
    Error,
    InvalidArgument,
    NumericalError,
    elm_features,
    empirical_correntropy,
    fit_mcc,
    fit_mcc_vc,
    gaussian_kernel,
    generate_linear_data,
    init_elm,
    kernel_density_estimate,
    make_range,
    optimize_params,
    param_objective,
    ridge_solve,
    rmse_predictions,
    rmse_weights,
    sample_noise,
)
from ._mccvc import synth_bench_json as _synth_bench_json

__all__ = [
    "DataError",
    "Error",
    "InvalidArgument",
    "NumericalError",
    "elm_features",
    "empirical_correntropy",
    "fit_mcc",
    "fit_mcc_vc",
    "gaussian_kernel",
    "generate_linear_data",
    "init_elm",
    "kernel_density_estimate",
    "make_range",
    "optimize_params",
    "param_objective",
    "ridge_solve",
    "rmse_predictions",
    "rmse_weights",
    "sample_noise",
    "synth_bench",
]

__version__ = "0.1.0"


def synth_bench(runs=100, seed=42, cases=(1, 2, 3, 4), methods=("mmse", "mcc", "mcc-vc"), samples=400):
    """Run the synthetic benchmark and return the report as a dict (timing omitted)."""
    return json.loads(_synth_bench_json(runs, seed, list(cases), list(methods), samples))
