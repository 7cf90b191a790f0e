#pragma once

#include <Eigen/Dense>

namespace mccvc {

struct SpdSolution {
    Eigen::VectorXd x;
    /// Diagonal loading that was added before the factorization succeeded (0 if none).
    double jitter = 0.0;
};

/// Solves A x = b for symmetric positive-definite A by Cholesky factorization.
///
/// A factorization with a non-positive or negligible pivot counts as
/// singular. When `allow_jitter` is set, one retry is made with
/// 1e-10 * trace(A) / n added to the diagonal; otherwise, or if the retry
/// fails, NumericalError is thrown. The solution must satisfy
/// ||A' x - b||_inf <= 1e-8 (1 + ||b||_inf) for the factorized matrix A'.
SpdSolution solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool allow_jitter);

}  // namespace mccvc
