#pragma once

#include "brt/bootstrap.hpp"
#include "brt/dataset.hpp"
#include "brt/linalg.hpp"
#include "brt/regression.hpp"

#include <vector>

namespace brt {

/// One step of the sequential rank scan.
struct KpResult {
    int q = 0;
    double stat = 0.0;
    int df = 0;
    double p_value = 1.0;
    bool truncated = false;  ///< pseudo-inverse dropped near-null directions
};

struct RankEstimate {
    enum class Method { threshold, sequential };
    int value = 0;
    Method method = Method::threshold;
    std::vector<KpResult> trail;  ///< sequential only: every tested q
};

/// Largest j <= r with sigma_j >= kappa_n, or 0 when no such j exists.
/// `sigma` must be sorted descending.
RankEstimate threshold_rank(const Vector& sigma, double kappa_n, int r);

/// The rank LM statistic for H0: rank = q. With SVD blocks of `coef` at split
/// q, lambda = P2' coef Q2, ell = vec(lambda), T = Q2 (x) P2, the statistic is
/// n * ell' (T' Omega T)^{-1} ell with df = (m-q)(k-q); p-value from the
/// chi-square upper tail. Omega is the covariance of vec(sqrt(n) * coef);
/// near-null directions below 1e-10 of the top eigenvalue are truncated
/// (pseudo-inverse) and flagged.
KpResult kp_statistic(const Matrix& coef, const Matrix& omega, int q, long n);

/// Tests q = 0, 1, ..., k-1 in order at level beta; returns the first
/// accepted q, or k when every q rejects. The trail records each tested step.
RankEstimate sequential_rank(const Matrix& coef, const Matrix& omega, long n, double beta);

/// Inputs for the sequential Kleibergen-Paap scan: the whitened coefficient
/// matrix Theta = (Zt'Zt/n)^{-1/2} (Zt'Xt/n) (Xt'Xt/n)^{-1/2} and the moment
/// variance of vec(sqrt(n) Theta), assembled to match the active resampling
/// scheme (plain outer products, clustered sums, or a Bartlett kernel with
/// bandwidth = block length).
struct KpInputs {
    Matrix theta;  ///< m x k whitened coefficient matrix
    Matrix omega;  ///< (mk) x (mk) moment variance
    long n = 0;    ///< effective sample size
};

KpInputs kp_moment_inputs(const FirstStageFit& fit, const Dataset& d,
                          const BootstrapScheme& scheme);

}  // namespace brt
