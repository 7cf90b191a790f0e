#include "mccvc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mccvc/error.hpp"

namespace mccvc {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kInv2SqrtPi = 1.0 / (2.0 * std::sqrt(std::numbers::pi));

// Unchecked kernel; callers validate once per batch.
inline double kernel_unchecked(double u, double sigma) {
    const double z = u / sigma;
    return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

void check_errors(std::span<const double> errors) {
    if (errors.empty()) {
        throw InvalidArgument("error vector is empty");
    }
    for (const double e : errors) {
        if (!std::isfinite(e)) {
            throw InvalidArgument("error vector contains a non-finite value");
        }
    }
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("kernel width must be positive and finite, got " +
                              std::to_string(sigma));
    }
}

// Mean of kernel values at (errors - center). Shared by every estimator so
// that they agree bit for bit.
double correntropy_unchecked(std::span<const double> errors, double sigma, double center) {
    double sum = 0.0;
    for (const double e : errors) {
        sum += kernel_unchecked(e - center, sigma);
    }
    return sum / static_cast<double>(errors.size());
}

double objective_unchecked(std::span<const double> errors, double sigma, double center) {
    return kInv2SqrtPi / sigma - 2.0 * correntropy_unchecked(errors, sigma, center);
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double mean = mean_of(values);
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

bool strictly_increasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

}  // namespace

KernelParams::KernelParams(double sigma, double center) : sigma_(sigma), center_(center) {
    check_sigma(sigma);
    if (!std::isfinite(center)) {
        throw InvalidArgument("kernel center must be finite");
    }
}

CenterRule parse_center_rule(std::string_view name) {
    if (name == "grid") return CenterRule::ExplicitGrid;
    if (name == "mean") return CenterRule::MeanOfErrors;
    if (name == "median") return CenterRule::MedianOfErrors;
    throw InvalidArgument("unknown center rule '" + std::string(name) +
                          "' (expected grid, mean or median)");
}

std::string_view to_string(CenterRule rule) {
    switch (rule) {
        case CenterRule::ExplicitGrid: return "grid";
        case CenterRule::MeanOfErrors: return "mean";
        case CenterRule::MedianOfErrors: return "median";
    }
    return "unknown";
}

void ParamGrid::validate() const {
    if (sigma_set.empty()) {
        throw InvalidArgument("kernel width set is empty");
    }
    for (const double s : sigma_set) {
        check_sigma(s);
    }
    if (!strictly_increasing(sigma_set)) {
        throw InvalidArgument("kernel width set must be strictly increasing");
    }
    if (center_rule == CenterRule::ExplicitGrid) {
        if (center_set.empty()) {
            throw InvalidArgument("center set is empty");
        }
        for (const double c : center_set) {
            if (!std::isfinite(c)) {
                throw InvalidArgument("center set contains a non-finite value");
            }
        }
        if (!strictly_increasing(center_set)) {
            throw InvalidArgument("center set must be strictly increasing");
        }
    }
}

ParamGrid ParamGrid::synthetic_default() {
    return ParamGrid{make_range(0.2, 0.2, 5.0), make_range(-5.0, 0.1, 5.0),
                     CenterRule::ExplicitGrid};
}

ParamGrid ParamGrid::singleton(double sigma, double center) {
    return ParamGrid{{sigma}, {center}, CenterRule::ExplicitGrid};
}

std::vector<double> make_range(double start, double step, double end) {
    if (!std::isfinite(start) || !std::isfinite(end) || !(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("range needs finite bounds and a positive step");
    }
    if (end < start) {
        throw InvalidArgument("range end lies below its start");
    }
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = start + static_cast<double>(i) * step;
        if (std::abs(v) < 1e-9 * step) {
            v = 0.0;
        }
        values.push_back(v);
    }
    return values;
}

std::vector<double> parse_range(std::string_view spec) {
    double parts[3];
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t next = k < 2 ? spec.find(':', pos) : spec.size();
        if (next == std::string_view::npos) {
            throw InvalidArgument("range must look like start:step:end, got '" +
                                  std::string(spec) + "'");
        }
        const std::string token(spec.substr(pos, next - pos));
        try {
            std::size_t used = 0;
            parts[k] = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad number '" + token + "' in range '" + std::string(spec) + "'");
        }
        pos = next + 1;
    }
    return make_range(parts[0], parts[1], parts[2]);
}

double gaussian_kernel(double u, double sigma) {
    check_sigma(sigma);
    if (!std::isfinite(u)) {
        throw InvalidArgument("kernel argument must be finite");
    }
    return kernel_unchecked(u, sigma);
}

double empirical_correntropy(std::span<const double> errors, const KernelParams& params) {
    check_errors(errors);
    return correntropy_unchecked(errors, params.sigma(), params.center());
}

double kernel_density_estimate(std::span<const double> sample, double point, double bandwidth) {
    check_errors(sample);
    check_sigma(bandwidth);
    double sum = 0.0;
    for (const double x : sample) {
        sum += kernel_unchecked(point - x, bandwidth);
    }
    return sum / static_cast<double>(sample.size());
}

double mcc_vc_cost(std::span<const double> errors, const KernelParams& params,
                   double weight_norm_sq, double lambda) {
    if (!(lambda >= 0.0) || !(weight_norm_sq >= 0.0)) {
        throw InvalidArgument("regularization weight and weight norm must be non-negative");
    }
    return -empirical_correntropy(errors, params) + lambda * weight_norm_sq;
}

double param_objective(std::span<const double> errors, double sigma, double center) {
    check_errors(errors);
    check_sigma(sigma);
    return objective_unchecked(errors, sigma, center);
}

double mean_of(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("mean of an empty sample");
    }
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double median_of(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("median of an empty sample");
    }
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double center_from_rule(std::span<const double> errors, CenterRule rule) {
    check_errors(errors);
    switch (rule) {
        case CenterRule::MeanOfErrors: return mean_of(errors);
        case CenterRule::MedianOfErrors: return median_of(errors);
        case CenterRule::ExplicitGrid: break;
    }
    throw InvalidArgument("center_from_rule needs the mean or median rule");
}

ParamChoice optimize_params(std::span<const double> errors, const ParamGrid& grid) {
    check_errors(errors);
    grid.validate();

    const double spread = sample_stddev(errors);
    const double floor = 1e-3 * (spread > 0.0 ? spread : 1.0);
    bool clamped = false;
    std::vector<double> sigmas = grid.sigma_set;
    for (double& s : sigmas) {
        if (s < floor) {
            s = floor;
            clamped = true;
        }
    }

    std::vector<double> centers;
    if (grid.center_rule == CenterRule::ExplicitGrid) {
        centers = grid.center_set;
    } else {
        centers = {center_from_rule(errors, grid.center_rule)};
    }
    const double median = centers.size() > 1 ? median_of(errors) : 0.0;

    double best_obj = 0.0;
    double best_sigma = 0.0;
    double best_center = 0.0;
    bool have_best = false;
    // Widths are visited in increasing order, so a tie never displaces a
    // smaller width.
    for (const double s : sigmas) {
        for (const double c : centers) {
            const double obj = objective_unchecked(errors, s, c);
            if (!have_best) {
                best_obj = obj, best_sigma = s, best_center = c, have_best = true;
                continue;
            }
            const double scale = std::max(std::abs(obj), std::abs(best_obj));
            const bool tie = std::abs(obj - best_obj) <= 1e-12 * scale;
            if (tie) {
                if (s == best_sigma && std::abs(c - median) < std::abs(best_center - median)) {
                    best_obj = obj, best_center = c;
                }
            } else if (obj < best_obj) {
                best_obj = obj, best_sigma = s, best_center = c;
            }
        }
    }
    return ParamChoice{KernelParams(best_sigma, best_center), best_obj, clamped, floor};
}

}  // namespace mccvc
