#pragma once

#include <Eigen/Dense>

#include <utility>

namespace brt {

/// Dense real matrix, the numeric carrier for every block in the pipeline.
/// All operations reject non-finite entries.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full singular value decomposition A = P * diag(sigma) * Q^T with square
/// orthonormal P (m x m) and Q (k x k), singular values sorted descending.
struct SvdResult {
    Matrix P;       ///< m x m, orthonormal
    Vector sigma;   ///< k singular values, descending, nonnegative
    Matrix Q;       ///< k x k, orthonormal
};

/// Full SVD of an m x k matrix with m >= k (transpose first if needed).
/// The full factors are required downstream: tail blocks take trailing
/// columns of P beyond the k-th.
SvdResult svd(const Matrix& A);

/// Sum of the k - r smallest squared singular values of A (m x k, m >= k);
/// zero exactly when rank(A) <= r. Requires 0 <= r < k.
double phi(const Matrix& A, int r);

/// Last m - r_hat columns of P and last k - r_hat columns of Q.
/// r_hat = 0 returns (P, Q) unchanged; r_hat = k leaves Q2 with no columns.
std::pair<Matrix, Matrix> tail_blocks(const SvdResult& s, int r_hat);

/// Sum over j = r - r_hat + 1, ..., k - r_hat of the j-th largest squared
/// singular value of P2^T * M * Q2, i.e. the k - r smallest squared singular
/// values of the projected matrix. Empty index windows sum to zero.
/// Requires r_hat <= r (a first-step rejection must already have fired
/// otherwise).
double projected_phi(const Matrix& P2, const Matrix& M, const Matrix& Q2, int r, int r_hat);

}  // namespace brt
