#include "method.hpp"

#include "mccvc/error.hpp"

namespace mccvc::detail {

MethodKind parse_method(const std::string& name) {
    if (name == "mmse" || name == "relm") return MethodKind::Mmse;
    if (name == "mcc" || name == "elm-mcc" || name == "elm-rcc") return MethodKind::Mcc;
    if (name == "mcc-vc" || name == "elm-mcc-vc") return MethodKind::MccVc;
    throw InvalidArgument("unknown method '" + name + "'");
}

MethodFit fit_method(MethodKind kind, const DesignMatrix& design, const MethodSettings& settings) {
    MethodFit out;
    switch (kind) {
        case MethodKind::Mmse:
            // The diagonal loading plays the role of lambda in the closed form.
            out.beta = ridge_solve(design, settings.lambda_prime);
            return out;
        case MethodKind::Mcc: {
            FitResult fit = fit_mcc(design, settings.sigma, settings.lambda_prime,
                                    settings.max_iterations, settings.tolerance);
            out.beta = std::move(fit.beta);
            out.kernel = KernelParams(settings.sigma, 0.0);
            out.iterations = fit.iterations_run;
            out.converged = fit.converged;
            return out;
        }
        case MethodKind::MccVc: {
            FitConfig config;
            config.lambda_prime = settings.lambda_prime;
            config.max_iterations = settings.max_iterations;
            config.tolerance = settings.tolerance;
            config.grid = settings.grid ? *settings.grid : ParamGrid::synthetic_default();
            FitResult fit = fit_mcc_vc(design, config);
            out.kernel = fit.final_params();
            out.offset = out.kernel->center();
            out.beta = std::move(fit.beta);
            out.iterations = fit.iterations_run;
            out.converged = fit.converged;
            return out;
        }
    }
    throw InvalidArgument("unhandled method");
}

}  // namespace mccvc::detail
