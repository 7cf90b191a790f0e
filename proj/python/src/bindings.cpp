#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mccvc/bench.hpp"
#include "mccvc/error.hpp"

namespace py = pybind11;
using namespace mccvc;

namespace {

ParamGrid make_grid(const std::vector<double>& sigmas, const std::vector<double>& centers,
                    const std::string& rule) {
    ParamGrid g{sigmas, centers, parse_center_rule(rule)};
    g.validate();
    return g;
}

py::dict fit_to_dict(const FitResult& fit) {
    py::list trace;
    for (const auto& r : fit.trace) {
        py::dict d;
        d["sigma"] = r.sigma;
        d["center"] = r.center;
        d["cost"] = r.cost;
        d["max_delta_beta"] = r.max_delta_beta;
        d["sigma_clamped"] = r.sigma_clamped;
        d["jitter"] = r.jitter;
        d["beta"] = r.beta;
        trace.append(d);
    }
    py::dict out;
    out["beta"] = fit.beta;
    out["iterations"] = fit.iterations_run;
    out["converged"] = fit.converged;
    const KernelParams p = fit.final_params();
    out["sigma"] = p.sigma();
    out["center"] = p.center();
    out["trace"] = trace;
    return out;
}

NoiseModel preset(int case_index) {
    const auto presets = inner_noise_presets();
    if (case_index < 1 || case_index > static_cast<int>(presets.size())) {
        throw InvalidArgument("noise case must be between 1 and 4");
    }
    return presets[static_cast<std::size_t>(case_index - 1)];
}

}  // namespace

PYBIND11_MODULE(_mccvc, m) {
    m.doc() = "Variable-center correntropy regression for linear-in-parameters models";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def("gaussian_kernel", &gaussian_kernel, py::arg("u"), py::arg("sigma"));
    m.def(
        "empirical_correntropy",
        [](const std::vector<double>& e, double sigma, double center) {
            return empirical_correntropy(e, KernelParams(sigma, center));
        },
        py::arg("errors"), py::arg("sigma"), py::arg("center") = 0.0);
    m.def(
        "kernel_density_estimate",
        [](const std::vector<double>& s, double point, double bw) { return kernel_density_estimate(s, point, bw); },
        py::arg("sample"), py::arg("point"), py::arg("bandwidth"));
    m.def(
        "param_objective",
        [](const std::vector<double>& e, double sigma, double center) { return param_objective(e, sigma, center); },
        py::arg("errors"), py::arg("sigma"), py::arg("center"));
    m.def(
        "optimize_params",
        [](const std::vector<double>& e, const std::vector<double>& sigmas, const std::vector<double>& centers,
           const std::string& rule) {
            const ParamChoice c = optimize_params(e, make_grid(sigmas, centers, rule));
            py::dict d;
            d["sigma"] = c.params.sigma();
            d["center"] = c.params.center();
            d["objective"] = c.objective;
            d["sigma_clamped"] = c.sigma_clamped;
            return d;
        },
        py::arg("errors"), py::arg("sigmas"), py::arg("centers") = std::vector<double>{},
        py::arg("center_rule") = "grid");
    m.def("make_range", &make_range, py::arg("start"), py::arg("step"), py::arg("end"));

    m.def(
        "init_elm",
        [](Eigen::Index d, Eigen::Index hidden, std::uint64_t seed) {
            const auto spec = init_elm(d, hidden, seed);
            return py::make_tuple(spec.input_weights, spec.biases);
        },
        py::arg("input_dim"), py::arg("hidden"), py::arg("seed"));
    m.def(
        "elm_features",
        [](const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const Eigen::MatrixXd& x) {
            return elm_features(HiddenLayerSpec{w, b}, x);
        },
        py::arg("weights"), py::arg("biases"), py::arg("inputs"));

    m.def(
        "ridge_solve",
        [](const Eigen::MatrixXd& h, const Eigen::VectorXd& t, double lambda) {
            return ridge_solve(DesignMatrix{h, t}, lambda);
        },
        py::arg("features"), py::arg("targets"), py::arg("lambda_prime") = 0.0);
    m.def(
        "fit_mcc_vc",
        [](const Eigen::MatrixXd& h, const Eigen::VectorXd& t, double lambda_prime, int max_iter, double tol,
           std::optional<std::vector<double>> sigmas, std::optional<std::vector<double>> centers,
           const std::string& rule) {
            FitConfig cfg;
            cfg.lambda_prime = lambda_prime;
            cfg.max_iterations = max_iter;
            cfg.tolerance = tol;
            if (sigmas) cfg.grid.sigma_set = *sigmas;
            if (centers) cfg.grid.center_set = *centers;
            cfg.grid.center_rule = parse_center_rule(rule);
            FitResult fit;
            {
                py::gil_scoped_release release;
                fit = fit_mcc_vc(DesignMatrix{h, t}, cfg);
            }
            return fit_to_dict(fit);
        },
        py::arg("features"), py::arg("targets"), py::arg("lambda_prime") = 1e-4, py::arg("max_iter") = 100,
        py::arg("tol") = 1e-10, py::arg("sigmas") = py::none(), py::arg("centers") = py::none(),
        py::arg("center_rule") = "grid");
    m.def(
        "fit_mcc",
        [](const Eigen::MatrixXd& h, const Eigen::VectorXd& t, double sigma, double lambda_prime, int max_iter,
           double tol) { return fit_to_dict(fit_mcc(DesignMatrix{h, t}, sigma, lambda_prime, max_iter, tol)); },
        py::arg("features"), py::arg("targets"), py::arg("sigma"), py::arg("lambda_prime") = 1e-4,
        py::arg("max_iter") = 100, py::arg("tol") = 1e-10);

    m.def(
        "sample_noise", [](int case_index, std::size_t n, std::uint64_t seed) { return sample_noise(preset(case_index), n, seed); },
        py::arg("case"), py::arg("n"), py::arg("seed"));
    m.def(
        "generate_linear_data",
        [](const Eigen::VectorXd& w, std::size_t n, int case_index, std::uint64_t seed) {
            auto d = generate_linear_data(w, n, preset(case_index), seed);
            return py::make_tuple(d.inputs, d.targets);
        },
        py::arg("w_star"), py::arg("n"), py::arg("case"), py::arg("seed"));
    m.def("rmse_weights", &rmse_weights, py::arg("estimated"), py::arg("true_w"));
    m.def("rmse_predictions", &rmse_predictions, py::arg("predicted"), py::arg("targets"));

    m.def(
        "synth_bench_json",
        [](int runs, std::uint64_t seed, const std::vector<int>& cases, const std::vector<std::string>& methods,
           std::size_t samples) {
            SynthBenchConfig cfg;
            cfg.runs = runs;
            cfg.seed = seed;
            cfg.cases = cases;
            cfg.methods = methods;
            cfg.samples = samples;
            py::gil_scoped_release release;
            return run_synth_bench(cfg).to_json(false).dump();
        },
        py::arg("runs") = 100, py::arg("seed") = 42, py::arg("cases") = std::vector<int>{1, 2, 3, 4},
        py::arg("methods") = std::vector<std::string>{"mmse", "mcc", "mcc-vc"}, py::arg("samples") = 400);
}
