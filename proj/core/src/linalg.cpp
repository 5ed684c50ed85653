#include "brt/linalg.hpp"

#include "brt/errors.hpp"

#include <string>

namespace brt {

namespace {

void require_finite(const Matrix& A, const char* what) {
    if (!A.allFinite()) {
        throw InvalidInputError(std::string(what) + ": non-finite entries");
    }
}

}  // namespace

SvdResult svd(const Matrix& A) {
    require_finite(A, "svd");
    if (A.rows() < A.cols()) {
        throw InvalidInputError("svd: need rows >= cols; transpose the input first");
    }
    Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double phi(const Matrix& A, int r) {
    require_finite(A, "phi");
    const int k = static_cast<int>(A.cols());
    if (A.rows() < k) {
        throw InvalidInputError("phi: need rows >= cols; transpose the input first");
    }
    if (r < 0 || r >= k) {
        throw InvalidRankError("phi: rank r must satisfy 0 <= r < " + std::to_string(k));
    }
    Eigen::JacobiSVD<Matrix> dec(A);
    const Vector& s = dec.singularValues();
    // smallest terms first for a stable tail sum
    double sum = 0.0;
    for (int j = k - 1; j >= r; --j) sum += s[j] * s[j];
    return sum;
}

std::pair<Matrix, Matrix> tail_blocks(const SvdResult& s, int r_hat) {
    const int m = static_cast<int>(s.P.rows());
    const int k = static_cast<int>(s.Q.rows());
    if (r_hat < 0 || r_hat > k) {
        throw InvalidRankError("tail_blocks: r_hat must satisfy 0 <= r_hat <= " +
                               std::to_string(k));
    }
    return {s.P.rightCols(m - r_hat), s.Q.rightCols(k - r_hat)};
}

double projected_phi(const Matrix& P2, const Matrix& M, const Matrix& Q2, int r, int r_hat) {
    if (r_hat > r) {
        throw InvalidStateError("projected_phi: r_hat > r (first step should have rejected)");
    }
    if (P2.rows() != M.rows() || Q2.rows() != M.cols()) {
        throw InvalidInputError("projected_phi: nonconformable blocks");
    }
    require_finite(M, "projected_phi");
    if (Q2.cols() == 0 || P2.cols() == 0) return 0.0;

    Matrix G = P2.transpose() * M * Q2;
    Eigen::JacobiSVD<Matrix> dec(G);
    const Vector& s = dec.singularValues();
    // window j = r - r_hat + 1 .. k - r_hat (1-based) of the descending values
    const int lo = r - r_hat;  // 0-based first index
    double sum = 0.0;
    for (int j = static_cast<int>(s.size()) - 1; j >= lo; --j) sum += s[j] * s[j];
    return sum;
}

}  // namespace brt
