#pragma once

#include "brt/dataset.hpp"
#include "brt/linalg.hpp"

namespace brt {

/// First-stage OLS fit with the controls partialled out.
///
/// Pi_hat solves the partialled normal equations (Z' M_W Z) Pi = Z' M_W X;
/// Gamma_hat regresses X - Z * Pi_hat on W; residuals = X - fitted.
/// The partialled blocks and the draw operator S = (Z~'Z~)^{-1} Z~' are kept
/// so bootstrap draws reduce to one small matrix product each.
struct FirstStageFit {
    Matrix Pi_hat;      ///< m x k
    Matrix Gamma_hat;   ///< l x k (0 x k when W is empty)
    Matrix residuals;   ///< n x k
    Matrix fitted;      ///< n x k, fitted + residuals == X
    Matrix Zt;          ///< n x m partialled instruments M_W Z
    Matrix Xt;          ///< n x k partialled endogenous M_W X
    Matrix S;           ///< m x n, Pi*(u) = S u
};

/// The symmetric idempotent projector M_W = I - W (W'W)^{-1} W'.
/// Materializes an n x n matrix; production paths use partialled
/// cross-products instead, so this is for small n and test oracles.
Matrix annihilator(const Matrix& W, long n);

FirstStageFit fit_first_stage(const Dataset& d);

}  // namespace brt
