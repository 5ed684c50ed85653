#include "brt/rank_select.hpp"

#include "brt/errors.hpp"
#include "brt/prob.hpp"

#include <cmath>
#include <string>

namespace brt {

namespace {

constexpr double kPinvTol = 1e-10;

// Symmetric inverse square root of a PD matrix; throws on rank deficiency.
Matrix inverse_sqrt_pd(const Matrix& A, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    const Vector& w = eig.eigenvalues();
    if (w[0] <= kPinvTol * w[w.size() - 1] || w[w.size() - 1] <= 0.0) {
        throw CollinearityError(std::string(what) + ": second-moment matrix is rank deficient");
    }
    return eig.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

}  // namespace

RankEstimate threshold_rank(const Vector& sigma, double kappa_n, int r) {
    if (!(kappa_n > 0.0)) throw InvalidInputError("threshold_rank: kappa_n must be positive");
    RankEstimate est;
    est.method = RankEstimate::Method::threshold;
    const int upper = std::min<int>(r, static_cast<int>(sigma.size()));
    for (int j = 1; j <= upper; ++j) {
        if (sigma[j - 1] >= kappa_n) est.value = j;
    }
    return est;
}

KpResult kp_statistic(const Matrix& coef, const Matrix& omega, int q, long n) {
    const int m = static_cast<int>(coef.rows());
    const int k = static_cast<int>(coef.cols());
    if (m < k) throw InvalidInputError("kp_statistic: need rows >= cols");
    if (q < 0 || q >= k) {
        throw InvalidRankError("kp_statistic: q must satisfy 0 <= q < " + std::to_string(k));
    }
    if (omega.rows() != m * k || omega.cols() != m * k) {
        throw InvalidInputError("kp_statistic: omega must be (mk) x (mk)");
    }
    if (!coef.allFinite() || !omega.allFinite()) {
        throw InvalidInputError("kp_statistic: non-finite input");
    }

    SvdResult s = svd(coef);
    auto [P2, Q2] = tail_blocks(s, q);
    Matrix lambda = P2.transpose() * coef * Q2;  // (m-q) x (k-q)
    const long dim = lambda.size();
    Vector ell = Eigen::Map<const Vector>(lambda.data(), dim);

    // T = Q2 (x) P2 maps vec(coef)-space to vec(lambda)-space
    Matrix T(static_cast<long>(m) * k, dim);
    for (int j = 0; j < Q2.cols(); ++j) {
        for (int i = 0; i < Q2.rows(); ++i) {
            T.block(static_cast<long>(i) * m, (static_cast<long>(j)) * P2.cols(), m, P2.cols()) =
                Q2(i, j) * P2;
        }
    }
    Matrix A = T.transpose() * omega * T;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    const Vector& w = eig.eigenvalues();
    const double wmax = w[w.size() - 1];
    if (!(wmax > 0.0) || !std::isfinite(wmax)) {
        throw DegenerateVarianceError(
            "kp_statistic: weighting matrix is numerically zero or non-finite");
    }
    const double tol = kPinvTol * wmax;

    KpResult out;
    out.q = q;
    out.df = (m - q) * (k - q);
    Vector proj = eig.eigenvectors().transpose() * ell;
    double quad = 0.0;
    for (long i = 0; i < w.size(); ++i) {
        if (w[i] > tol) {
            quad += proj[i] * proj[i] / w[i];
        } else {
            out.truncated = true;
        }
    }
    out.stat = static_cast<double>(n) * quad;
    out.p_value = chi_square_sf(out.stat, out.df);
    return out;
}

RankEstimate sequential_rank(const Matrix& coef, const Matrix& omega, long n, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw InvalidInputError("sequential_rank: beta must lie in (0, 1)");
    }
    const int k = static_cast<int>(std::min(coef.rows(), coef.cols()));
    RankEstimate est;
    est.method = RankEstimate::Method::sequential;
    est.value = k;
    for (int q = 0; q < k; ++q) {
        KpResult step = kp_statistic(coef, omega, q, n);
        est.trail.push_back(step);
        if (step.p_value >= beta) {
            est.value = q;
            break;
        }
    }
    return est;
}

KpInputs kp_moment_inputs(const FirstStageFit& fit, const Dataset& d,
                          const BootstrapScheme& scheme) {
    const long n = d.n;
    const int m = d.m();
    const int k = d.k();
    const double dn = static_cast<double>(n);

    Matrix G = inverse_sqrt_pd(fit.Zt.transpose() * fit.Zt / dn, "kp inputs: instruments");
    Matrix F = inverse_sqrt_pd(fit.Xt.transpose() * fit.Xt / dn, "kp inputs: endogenous block");

    KpInputs out;
    out.n = n;
    Matrix theta = G * (fit.Zt.transpose() * fit.Xt / dn) * F;
    // the downstream rank machinery wants rows >= cols; with fewer
    // instruments than endogenous variables everything runs on the transpose
    const bool flip = m < k;
    out.theta = flip ? Matrix(theta.transpose()) : theta;
    const int rows = flip ? k : m;
    const int cols = flip ? m : k;

    // per-row moment contributions: column-major vec of the per-row outer
    // product, (col factor)_j * (row factor vector)
    Matrix Zw = fit.Zt * G;  // rows are (G z~_i)'
    Matrix Xw = fit.Xt * F;  // rows are (F x~_i)'
    const Matrix& Rw = flip ? Xw : Zw;
    const Matrix& Cw = flip ? Zw : Xw;
    Matrix Wm(n, static_cast<long>(rows) * cols);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < cols; ++j) {
            Wm.block(i, static_cast<long>(j) * rows, 1, rows) = Cw(i, j) * Rw.row(i);
        }
    }

    switch (scheme.kind) {
        case BootstrapScheme::Kind::wild: {
            out.omega = Wm.transpose() * Wm / dn;
            break;
        }
        case BootstrapScheme::Kind::cluster: {
            Matrix sums = Matrix::Zero(scheme.n_clusters, static_cast<long>(rows) * cols);
            for (long i = 0; i < n; ++i) sums.row(scheme.cluster_group[i]) += Wm.row(i);
            out.omega = sums.transpose() * sums / dn;
            break;
        }
        case BootstrapScheme::Kind::block: {
            // Bartlett kernel, bandwidth = block length
            const int bw = scheme.block_length;
            out.omega = Wm.transpose() * Wm / dn;
            for (int j = 1; j < bw; ++j) {
                Matrix Gj = Wm.bottomRows(n - j).transpose() * Wm.topRows(n - j) / dn;
                out.omega += (1.0 - static_cast<double>(j) / bw) * (Gj + Gj.transpose());
            }
            break;
        }
    }
    return out;
}

}  // namespace brt
