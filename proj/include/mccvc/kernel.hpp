#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace mccvc {

/// Width and center of the Gaussian kernel that shapes the correntropy loss.
/// Both are in the units of the residuals.
class KernelParams {
public:
    KernelParams(double sigma, double center);

    double sigma() const noexcept { return sigma_; }
    double center() const noexcept { return center_; }

    friend bool operator==(const KernelParams&, const KernelParams&) = default;

private:
    double sigma_;
    double center_;
};

enum class CenterRule { ExplicitGrid, MeanOfErrors, MedianOfErrors };

CenterRule parse_center_rule(std::string_view name);
std::string_view to_string(CenterRule rule);

/// Admissible kernel widths and centers searched when fitting the kernel to
/// the residual distribution. With a Mean/Median rule the center set is
/// ignored and the center is computed from the residuals instead.
struct ParamGrid {
    std::vector<double> sigma_set;
    std::vector<double> center_set;
    CenterRule center_rule = CenterRule::ExplicitGrid;

    /// Throws InvalidArgument when the grid breaks its invariants.
    void validate() const;

    /// Widths 0.2..5.0 step 0.2, centers -5.0..5.0 step 0.1.
    static ParamGrid synthetic_default();
    static ParamGrid singleton(double sigma, double center);
};

/// Equally spaced values start, start+step, ..., up to end (inclusive, with
/// a small tolerance so that decimal steps land on the endpoint).
std::vector<double> make_range(double start, double step, double end);

/// Parses "start:step:end" into make_range(start, step, end).
std::vector<double> parse_range(std::string_view spec);

/// Normalized Gaussian density with standard deviation `sigma`, evaluated at `u`.
double gaussian_kernel(double u, double sigma);

/// Sample estimate of correntropy with variable center:
/// mean over i of gaussian_kernel(e_i - c, sigma).
double empirical_correntropy(std::span<const double> errors, const KernelParams& params);

/// Gaussian kernel density estimate of `sample` at `point`.
double kernel_density_estimate(std::span<const double> sample, double point, double bandwidth);

/// Regularized cost minimized over the weights:
/// -empirical_correntropy + lambda * ||beta||^2.
double mcc_vc_cost(std::span<const double> errors, const KernelParams& params,
                   double weight_norm_sq, double lambda);

/// Integrated squared distance between the shifted kernel and the residual
/// density, up to a term that does not depend on (sigma, center):
/// 1/(2 sqrt(pi) sigma) - 2 * empirical_correntropy.
double param_objective(std::span<const double> errors, double sigma, double center);

double center_from_rule(std::span<const double> errors, CenterRule rule);

struct ParamChoice {
    KernelParams params;
    double objective;
    /// True when grid widths below sigma_floor were raised to it.
    bool sigma_clamped = false;
    double sigma_floor = 0.0;
};

/// Grid search for the (sigma, center) pair minimizing param_objective.
///
/// Widths smaller than 1e-3 times the residual standard deviation (or 1e-3
/// when the residuals are constant) are raised to that floor. Ties within
/// 1e-12 relative go to the smaller width, then to the center closest to
/// the residual median.
ParamChoice optimize_params(std::span<const double> errors, const ParamGrid& grid);

double mean_of(std::span<const double> values);
double median_of(std::span<const double> values);

}  // namespace mccvc
