#include "mccvc/solvers.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "mccvc/error.hpp"

namespace mccvc {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

Eigen::VectorXd residuals(const DesignMatrix& design, const Eigen::VectorXd& beta) {
    return design.targets - design.features * beta;
}

void check_beta(const DesignMatrix& design, const Eigen::VectorXd& beta) {
    if (beta.size() != design.dim()) {
        throw InvalidArgument("weight vector has " + std::to_string(beta.size()) +
                              " entries, design matrix has " + std::to_string(design.dim()) +
                              " columns");
    }
}

struct StepOutcome {
    Eigen::VectorXd beta;
    double jitter;
};

StepOutcome kernel_step(const DesignMatrix& design, const KernelParams& params, double lambda_prime,
                        const Eigen::VectorXd& errors) {
    const Eigen::VectorXd weights = errors.unaryExpr([&](double e) {
        return gaussian_kernel(e - params.center(), params.sigma());
    });
    if (lambda_prime == 0.0 && (weights.array() == 0.0).all()) {
        throw NumericalError("all sample weights underflowed to zero; kernel width " +
                             std::to_string(params.sigma()) + " is far too small for the residuals");
    }
    auto solution = weighted_ridge_solve(design, weights, params.center(), lambda_prime);
    return {std::move(solution.x), solution.jitter};
}

// H' diag(w) H, built as a symmetric rank update of sqrt(w) H. Every
// normal-equation matrix goes through here so that unit weights reproduce
// the unweighted Gram matrix exactly.
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& h, const Eigen::VectorXd* weights) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(h.cols(), h.cols());
    if (weights) {
        const Eigen::MatrixXd scaled = weights->cwiseSqrt().asDiagonal() * h;
        gram.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    } else {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(h.transpose());
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

using KernelChooser = std::function<ParamChoice(std::span<const double>)>;

// Shared fixed-point loop. The chooser supplies the kernel for each
// iteration from the current residuals.
FitResult run_fixed_point(const DesignMatrix& design, double lambda_prime, int max_iterations,
                          double tolerance, const Eigen::VectorXd& initial_beta,
                          const KernelChooser& choose) {
    const double n = static_cast<double>(design.samples());
    const double lambda = lambda_prime / (2.0 * n);

    FitResult result;
    Eigen::VectorXd beta =
        initial_beta.size() == 0 ? Eigen::VectorXd::Zero(design.dim()) : initial_beta;
    check_beta(design, beta);

    double previous_cost = 0.0;
    for (int k = 1; k <= max_iterations; ++k) {
        const Eigen::VectorXd errors = residuals(design, beta);
        const ParamChoice choice = choose(as_span(errors));
        const KernelParams& params = choice.params;
        if (k == 1) {
            previous_cost = mcc_vc_cost(as_span(errors), params, beta.squaredNorm(), lambda);
        }

        StepOutcome step = kernel_step(design, params, lambda_prime, errors);
        if (!step.beta.allFinite()) {
            throw NumericalError("non-finite weights at iteration " + std::to_string(k));
        }
        const Eigen::VectorXd new_errors = residuals(design, step.beta);
        const double cost =
            mcc_vc_cost(as_span(new_errors), params, step.beta.squaredNorm(), lambda);
        const double delta = (step.beta - beta).lpNorm<Eigen::Infinity>();

        beta = std::move(step.beta);
        result.trace.push_back(IterationRecord{params.sigma(), params.center(), cost, delta,
                                               choice.sigma_clamped, step.jitter, beta});
        result.iterations_run = k;
        if (std::abs(cost - previous_cost) < tolerance) {
            result.converged = true;
            break;
        }
        previous_cost = cost;
    }
    result.beta = std::move(beta);
    return result;
}

}  // namespace

void FitConfig::validate() const {
    if (!(lambda_prime >= 0.0) || !std::isfinite(lambda_prime)) {
        throw InvalidArgument("lambda' must be a finite non-negative number");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("iteration limit must be at least 1");
    }
    if (!(tolerance > 0.0)) {
        throw InvalidArgument("termination tolerance must be positive");
    }
    grid.validate();
}

KernelParams FitResult::final_params() const {
    if (trace.empty()) {
        throw InvalidArgument("fit result has no iterations");
    }
    return KernelParams(trace.back().sigma, trace.back().center);
}

Eigen::VectorXd ridge_solve(const DesignMatrix& design, double lambda) {
    design.validate();
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("ridge penalty must be a finite non-negative number");
    }
    const auto& h = design.features;
    Eigen::MatrixXd gram = weighted_gram(h, nullptr);
    gram.diagonal().array() += lambda;
    return solve_spd(gram, h.transpose() * design.targets, false).x;
}

SpdSolution weighted_ridge_solve(const DesignMatrix& design, const Eigen::VectorXd& weights,
                                 double center, double lambda_prime) {
    design.validate();
    if (weights.size() != design.samples()) {
        throw InvalidArgument("one weight per sample is required");
    }
    if (!(lambda_prime >= 0.0)) {
        throw InvalidArgument("lambda' must be non-negative");
    }
    const auto& h = design.features;
    if ((weights.array() < 0.0).any() || !weights.allFinite()) {
        throw InvalidArgument("sample weights must be finite and non-negative");
    }
    Eigen::MatrixXd gram = weighted_gram(h, &weights);
    gram.diagonal().array() += lambda_prime;
    const Eigen::VectorXd shifted = design.targets.array() - center;
    const Eigen::VectorXd rhs = h.transpose() * (weights.cwiseProduct(shifted));
    return solve_spd(gram, rhs, lambda_prime == 0.0);
}

Eigen::VectorXd weighted_ridge_step(const DesignMatrix& design, const KernelParams& params,
                                    double lambda_prime, const Eigen::VectorXd& beta_prev) {
    design.validate();
    check_beta(design, beta_prev);
    return kernel_step(design, params, lambda_prime, residuals(design, beta_prev)).beta;
}

double fit_cost(const DesignMatrix& design, const KernelParams& params, double lambda,
                const Eigen::VectorXd& beta) {
    check_beta(design, beta);
    const Eigen::VectorXd errors = residuals(design, beta);
    return mcc_vc_cost(as_span(errors), params, beta.squaredNorm(), lambda);
}

Eigen::VectorXd fit_cost_gradient(const DesignMatrix& design, const KernelParams& params,
                                  double lambda, const Eigen::VectorXd& beta) {
    check_beta(design, beta);
    const double s2 = params.sigma() * params.sigma();
    const Eigen::VectorXd shifted = residuals(design, beta).array() - params.center();
    const Eigen::VectorXd coeff = shifted.unaryExpr([&](double u) {
        return gaussian_kernel(u, params.sigma()) * u / s2;
    });
    const double n = static_cast<double>(design.samples());
    return -(design.features.transpose() * coeff) / n + 2.0 * lambda * beta;
}

FitResult fit_mcc_vc(const DesignMatrix& design, const FitConfig& config) {
    design.validate();
    config.validate();
    const ParamGrid& grid = config.grid;
    return run_fixed_point(design, config.lambda_prime, config.max_iterations, config.tolerance,
                           config.initial_beta,
                           [&grid](std::span<const double> e) { return optimize_params(e, grid); });
}

FitResult fit_mcc(const DesignMatrix& design, double sigma, double lambda_prime, int max_iterations,
                  double tolerance) {
    design.validate();
    FitConfig config;
    config.lambda_prime = lambda_prime;
    config.max_iterations = max_iterations;
    config.tolerance = tolerance;
    config.grid = ParamGrid::singleton(sigma, 0.0);
    config.validate();
    const KernelParams fixed(sigma, 0.0);
    return run_fixed_point(design, lambda_prime, max_iterations, tolerance, Eigen::VectorXd(),
                           [&fixed](std::span<const double>) {
                               return ParamChoice{fixed, 0.0, false, 0.0};
                           });
}

}  // namespace mccvc
