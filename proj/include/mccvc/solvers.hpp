#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mccvc/kernel.hpp"
#include "mccvc/linalg.hpp"
#include "mccvc/lip_models.hpp"

namespace mccvc {

struct FitConfig {
    /// Diagonal loading of the weighted normal equations. The matching
    /// penalty weight in the cost is lambda_prime / (2N).
    double lambda_prime = 1e-4;
    int max_iterations = 100;
    double tolerance = 1e-10;
    ParamGrid grid = ParamGrid::synthetic_default();
    /// Starting weights; empty means all zeros.
    Eigen::VectorXd initial_beta;

    void validate() const;
};

struct IterationRecord {
    double sigma;
    double center;
    /// Regularized cost of the new weights under this iteration's kernel.
    double cost;
    double max_delta_beta;
    bool sigma_clamped;
    double jitter;
    Eigen::VectorXd beta;
};

struct FitResult {
    Eigen::VectorXd beta;
    int iterations_run = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;

    /// Kernel used in the last iteration.
    KernelParams final_params() const;
};

/// Closed-form regularized least squares, (H'H + lambda I)^-1 H'T.
Eigen::VectorXd ridge_solve(const DesignMatrix& design, double lambda);

/// (H' W H + lambda' I)^-1 H' W (T - center) for explicit per-sample weights W.
SpdSolution weighted_ridge_solve(const DesignMatrix& design, const Eigen::VectorXd& weights,
                                 double center, double lambda_prime);

/// One fixed-point update: residuals from beta_prev, Gaussian weights
/// G_sigma(e_i - c), then the weighted ridge solve on targets shifted by c.
Eigen::VectorXd weighted_ridge_step(const DesignMatrix& design, const KernelParams& params,
                                    double lambda_prime, const Eigen::VectorXd& beta_prev);

/// Cost -mean G_sigma(e_i - c) + lambda ||beta||^2 at the given weights.
double fit_cost(const DesignMatrix& design, const KernelParams& params, double lambda,
                const Eigen::VectorXd& beta);

/// Gradient of fit_cost with respect to beta.
Eigen::VectorXd fit_cost_gradient(const DesignMatrix& design, const KernelParams& params,
                                  double lambda, const Eigen::VectorXd& beta);

/// Fixed-point solver with the kernel refitted to the residuals each iteration.
FitResult fit_mcc_vc(const DesignMatrix& design, const FitConfig& config);

/// Classical maximum-correntropy fit: kernel centered at zero with a fixed width.
FitResult fit_mcc(const DesignMatrix& design, double sigma, double lambda_prime, int max_iterations,
                  double tolerance);

}  // namespace mccvc
