#include "mccvc/linalg.hpp"

#include <limits>
#include <optional>
#include <sstream>

#include "mccvc/error.hpp"

namespace mccvc {

namespace {

std::optional<Eigen::VectorXd> try_cholesky(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        return std::nullopt;
    }
    const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
    const double largest = a.diagonal().cwiseAbs().maxCoeff();
    const double threshold =
        static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * largest;
    if ((pivots.array().square() <= threshold).any()) {
        return std::nullopt;
    }
    return llt.solve(b);
}

void check_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
    const double residual = (a * x - b).lpNorm<Eigen::Infinity>();
    const double bound = 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>());
    if (!x.allFinite() || !(residual <= bound)) {
        std::ostringstream msg;
        msg << "linear solve residual " << residual << " exceeds bound " << bound;
        throw NumericalError(msg.str());
    }
}

}  // namespace

SpdSolution solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool allow_jitter) {
    if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
        throw InvalidArgument("solve_spd needs a non-empty square system");
    }
    if (!a.allFinite() || !b.allFinite()) {
        throw NumericalError("linear system contains non-finite entries");
    }
    if (auto x = try_cholesky(a, b)) {
        check_residual(a, b, *x);
        return {std::move(*x), 0.0};
    }
    if (!allow_jitter) {
        throw NumericalError("normal-equation matrix is singular");
    }
    const double jitter = 1e-10 * a.trace() / static_cast<double>(a.rows());
    if (!(jitter > 0.0)) {
        throw NumericalError("normal-equation matrix is singular and has zero trace");
    }
    Eigen::MatrixXd loaded = a;
    loaded.diagonal().array() += jitter;
    if (auto x = try_cholesky(loaded, b)) {
        check_residual(loaded, b, *x);
        return {std::move(*x), jitter};
    }
    throw NumericalError("normal-equation matrix is singular even after diagonal jitter");
}

}  // namespace mccvc
