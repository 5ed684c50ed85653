#include "brt/regression.hpp"

#include "brt/errors.hpp"

#include <limits>
#include <sstream>
#include <string>

namespace brt {

namespace {

constexpr double kRankTol = 1e-10;

// Thin orthonormal basis of the column space; throws when rank-deficient.
Matrix orthonormal_basis(const Matrix& A, const char* what) {
    Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeThinU);
    const Vector& s = dec.singularValues();
    if (s.size() == 0 || s[0] <= 0.0 || s[s.size() - 1] <= kRankTol * s[0]) {
        std::ostringstream msg;
        msg << what << ": rank-deficient block (condition number "
            << (s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : std::numeric_limits<double>::infinity())
            << " exceeds " << 1.0 / kRankTol << ")";
        throw CollinearityError(msg.str());
    }
    return dec.matrixU();
}

}  // namespace

Matrix annihilator(const Matrix& W, long n) {
    if (W.cols() == 0) return Matrix::Identity(n, n);
    if (!W.allFinite()) throw InvalidInputError("annihilator: non-finite entries in W");
    if (W.rows() != n) throw InvalidInputError("annihilator: W has wrong row count");
    Matrix Q1 = orthonormal_basis(W, "annihilator");
    return Matrix::Identity(n, n) - Q1 * Q1.transpose();
}

FirstStageFit fit_first_stage(const Dataset& d) {
    const long n = d.n;
    if (!d.X.allFinite() || !d.Z.allFinite() || !d.W.allFinite()) {
        throw InvalidInputError("fit_first_stage: non-finite entries");
    }

    FirstStageFit fit;
    Matrix Qw;  // n x l orthonormal basis of span(W)
    if (d.l() > 0) {
        Qw = orthonormal_basis(d.W, "fit_first_stage: controls W");
        fit.Zt = d.Z - Qw * (Qw.transpose() * d.Z);
        fit.Xt = d.X - Qw * (Qw.transpose() * d.X);
    } else {
        fit.Zt = d.Z;
        fit.Xt = d.X;
    }

    // rank check on the partialled instruments
    Eigen::JacobiSVD<Matrix> zsvd(fit.Zt);
    const Vector& zs = zsvd.singularValues();
    if (zs[zs.size() - 1] <= kRankTol * zs[0]) {
        std::ostringstream msg;
        msg << "fit_first_stage: instruments collinear after partialling controls "
            << "(condition number "
            << (zs[zs.size() - 1] > 0.0 ? zs[0] / zs[zs.size() - 1]
                                        : std::numeric_limits<double>::infinity())
            << ")";
        throw CollinearityError(msg.str());
    }

    Eigen::HouseholderQR<Matrix> qr(fit.Zt);
    const int m = d.m();
    Matrix Qthin = qr.householderQ() * Matrix::Identity(n, m);
    Matrix R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    // S = R^{-1} Q', so Pi*(u) = S u solves the partialled normal equations
    fit.S = R.triangularView<Eigen::Upper>().solve(Qthin.transpose());

    fit.Pi_hat = fit.S * fit.Xt;
    if (d.l() > 0) {
        Matrix Xres = d.X - d.Z * fit.Pi_hat;
        // Gamma = (W'W)^{-1} W' Xres via the W basis
        Eigen::HouseholderQR<Matrix> wqr(d.W);
        fit.Gamma_hat = wqr.solve(Xres);
        fit.fitted = d.Z * fit.Pi_hat + d.W * fit.Gamma_hat;
    } else {
        fit.Gamma_hat = Matrix::Zero(0, d.k());
        fit.fitted = d.Z * fit.Pi_hat;
    }
    fit.residuals = d.X - fit.fitted;
    return fit;
}

}  // namespace brt
