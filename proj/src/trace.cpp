#include <algorithm>
#include <cmath>
#include <sstream>

#include "mccvc/bench.hpp"
#include "mccvc/error.hpp"

namespace mccvc {

double KernelTrace::max_density() const {
    return density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
}

double KernelTrace::kernel_peak() const { return gaussian_kernel(0.0, sigma); }

Json KernelTrace::to_json() const {
    Json j;
    j["iteration"] = iteration;
    j["sigma"] = sigma;
    j["center"] = center;
    j["residual_median"] = residual_median;
    j["support_fraction"] = support_fraction;
    j["histogram"] = {{"bin_edges", bin_edges}, {"density", density}};
    j["kernel_curve"] = {{"x", curve_x}, {"y", curve_y}};
    return j;
}

std::string KernelTrace::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "kind,iteration,x_lo,x_hi,value\n";
    for (std::size_t b = 0; b < density.size(); ++b) {
        out << "histogram," << iteration << ',' << bin_edges[b] << ',' << bin_edges[b + 1] << ','
            << density[b] << '\n';
    }
    for (std::size_t i = 0; i < curve_x.size(); ++i) {
        out << "kernel," << iteration << ',' << curve_x[i] << ',' << curve_x[i] << ',' << curve_y[i]
            << '\n';
    }
    return out.str();
}

std::vector<KernelTrace> kernel_trace(const DesignMatrix& design, const FitConfig& config,
                                      const TraceOptions& options) {
    if (options.bins < 1) throw InvalidArgument("histogram needs at least one bin");
    if (options.curve_points < 200) throw InvalidArgument("kernel curve needs at least 200 points");
    if (!(options.support_widths > 0.0)) throw InvalidArgument("support half-width must be positive");
    if (options.iterations.empty()) throw InvalidArgument("no iterations requested");
    for (const int k : options.iterations) {
        if (k < 1) throw InvalidArgument("iterations are numbered from 1");
    }

    const FitResult fit = fit_mcc_vc(design, config);
    std::vector<KernelTrace> traces;
    for (const int k : options.iterations) {
        if (k > fit.iterations_run) {
            throw InvalidArgument("iteration " + std::to_string(k) + " requested but the fit ran " +
                                  std::to_string(fit.iterations_run));
        }
        const auto idx = static_cast<std::size_t>(k - 1);
        const Eigen::VectorXd beta_prev =
            k == 1 ? (config.initial_beta.size() ? config.initial_beta
                                                 : Eigen::VectorXd::Zero(design.dim()))
                   : fit.trace[idx - 1].beta;
        const Eigen::VectorXd residuals = design.targets - design.features * beta_prev;
        const std::span<const double> view(residuals.data(), static_cast<std::size_t>(residuals.size()));

        KernelTrace t;
        t.iteration = k;
        t.sigma = fit.trace[idx].sigma;
        t.center = fit.trace[idx].center;
        t.residual_median = median_of(view);

        const double lo = t.center - options.support_widths * t.sigma;
        const double hi = t.center + options.support_widths * t.sigma;
        const double width = (hi - lo) / options.bins;
        std::vector<std::size_t> counts(static_cast<std::size_t>(options.bins), 0);
        std::size_t inside = 0;
        for (const double e : view) {
            if (e < lo || e > hi) continue;
            auto b = static_cast<std::size_t>((e - lo) / width);
            b = std::min(b, counts.size() - 1);
            ++counts[b];
            ++inside;
        }
        if (inside == 0) throw NumericalError("no residuals fall inside the histogram support");
        t.support_fraction = static_cast<double>(inside) / static_cast<double>(view.size());
        for (int b = 0; b <= options.bins; ++b) t.bin_edges.push_back(lo + b * width);
        for (const std::size_t c : counts) {
            t.density.push_back(static_cast<double>(c) / (static_cast<double>(inside) * width));
        }
        for (int i = 0; i < options.curve_points; ++i) {
            const double x = lo + (hi - lo) * i / (options.curve_points - 1);
            t.curve_x.push_back(x);
            t.curve_y.push_back(gaussian_kernel(x - t.center, t.sigma));
        }
        traces.push_back(std::move(t));
    }
    return traces;
}

}  // namespace mccvc
