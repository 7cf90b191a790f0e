#pragma once

#include <optional>
#include <string>

#include "mccvc/kernel.hpp"
#include "mccvc/solvers.hpp"

namespace mccvc::detail {

enum class MethodKind { Mmse, Mcc, MccVc };

/// Accepts both the plain names (mmse, mcc, mcc-vc) and the ELM-prefixed
/// ones (relm, elm-mcc, elm-mcc-vc; elm-rcc is an alias of elm-mcc).
MethodKind parse_method(const std::string& name);

struct MethodFit {
    Eigen::VectorXd beta;
    double offset = 0.0;
    std::optional<KernelParams> kernel;
    int iterations = 0;
    bool converged = true;
};

struct MethodSettings {
    double lambda_prime = 0.0;
    double sigma = 1.0;  // classical MCC only
    const ParamGrid* grid = nullptr;  // variable-center only
    int max_iterations = 100;
    double tolerance = 1e-10;
};

MethodFit fit_method(MethodKind kind, const DesignMatrix& design, const MethodSettings& settings);

}  // namespace mccvc::detail
