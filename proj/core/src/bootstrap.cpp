#include "brt/bootstrap.hpp"

#include "brt/errors.hpp"

#include <cmath>
#include <string>

namespace brt {

BootstrapScheme BootstrapScheme::wild() { return BootstrapScheme{}; }

BootstrapScheme BootstrapScheme::cluster(const Dataset& d) {
    if (!d.cluster_group) {
        throw InvalidInputError("cluster bootstrap requires cluster ids in the dataset");
    }
    BootstrapScheme s;
    s.kind = Kind::cluster;
    s.cluster_group = *d.cluster_group;
    s.n_clusters = d.n_clusters;
    return s;
}

BootstrapScheme BootstrapScheme::block(int length) {
    if (length < 1) throw InvalidInputError("block length must be positive");
    BootstrapScheme s;
    s.kind = Kind::block;
    s.block_length = length;
    return s;
}

const char* BootstrapScheme::name() const {
    switch (kind) {
        case Kind::wild: return "wild";
        case Kind::cluster: return "cluster";
        case Kind::block: return "block";
    }
    return "?";
}

Vector wild_weights(Rng& rng, long n) {
    Vector w(n);
    for (long i = 0; i < n; ++i) w[i] = rng.next_normal();
    return w;
}

Vector cluster_weights(Rng& rng, const BootstrapScheme& scheme, long n) {
    if (static_cast<long>(scheme.cluster_group.size()) != n) {
        throw InvalidInputError("cluster weights: scheme group size mismatch");
    }
    Vector eta(scheme.n_clusters);
    for (int g = 0; g < scheme.n_clusters; ++g) eta[g] = rng.next_rademacher();
    Vector w(n);
    for (long i = 0; i < n; ++i) w[i] = eta[scheme.cluster_group[i]];
    return w;
}

std::vector<long> block_row_indices(Rng& rng, long n, int block_length) {
    const long L = block_length;
    if (L < 1 || L > n) {
        throw InvalidInputError("block length " + std::to_string(L) +
                                " out of range for n = " + std::to_string(n));
    }
    const long n_blocks = (n + L - 1) / L;
    std::vector<long> rows;
    rows.reserve(n_blocks * L);
    for (long b = 0; b < n_blocks; ++b) {
        long start = static_cast<long>(rng.next_index(static_cast<std::uint64_t>(n - L + 1)));
        for (long j = 0; j < L && static_cast<long>(rows.size()) < n; ++j) {
            rows.push_back(start + j);
        }
    }
    return rows;
}

Matrix apply_row_weights(const Matrix& residuals, const Vector& weights) {
    if (weights.size() != residuals.rows()) {
        throw InvalidInputError("apply_row_weights: weight length mismatch");
    }
    return weights.asDiagonal() * residuals;
}

Matrix perturb_residuals(const Matrix& residuals, const BootstrapScheme& scheme, Rng& rng) {
    if (!residuals.allFinite()) {
        throw InvalidInputError("perturb_residuals: non-finite residuals");
    }
    const long n = residuals.rows();
    switch (scheme.kind) {
        case BootstrapScheme::Kind::wild:
            return apply_row_weights(residuals, wild_weights(rng, n));
        case BootstrapScheme::Kind::cluster:
            return apply_row_weights(residuals, cluster_weights(rng, scheme, n));
        case BootstrapScheme::Kind::block: {
            auto rows = block_row_indices(rng, n, scheme.block_length);
            Matrix out(n, residuals.cols());
            for (long i = 0; i < n; ++i) out.row(i) = residuals.row(rows[i]);
            return out;
        }
    }
    throw InvalidInputError("perturb_residuals: unknown scheme");
}

Matrix draw(const FirstStageFit& fit, const Dataset& d, const BootstrapScheme& scheme, Rng& rng) {
    Matrix u_star = perturb_residuals(fit.residuals, scheme, rng);
    return std::sqrt(static_cast<double>(d.n_source)) * (fit.S * u_star);
}

BootstrapDraws run(const FirstStageFit& fit, const Dataset& d, const BootstrapScheme& scheme,
                   int B, std::uint64_t seed) {
    if (B < 1) throw InvalidInputError("bootstrap count B must be >= 1");

    BootstrapDraws out;
    out.B = B;
    out.M_star.reserve(B);
    for (int b = 0; b < B; ++b) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b));
        out.M_star.push_back(draw(fit, d, scheme, rng));
    }

    const long mk = static_cast<long>(d.m()) * d.k();
    Vector mean = Vector::Zero(mk);
    for (const auto& M : out.M_star) {
        mean += Eigen::Map<const Vector>(M.data(), mk);
    }
    mean /= static_cast<double>(B);

    out.Omega_hat = Matrix::Zero(mk, mk);
    for (const auto& M : out.M_star) {
        Vector v = Eigen::Map<const Vector>(M.data(), mk) - mean;
        out.Omega_hat.noalias() += v * v.transpose();
    }
    out.Omega_hat /= static_cast<double>(B > 1 ? B - 1 : 1);
    return out;
}

std::vector<std::string> validate_scheme(const BootstrapScheme& scheme, const Dataset& d) {
    std::vector<std::string> warnings;
    switch (scheme.kind) {
        case BootstrapScheme::Kind::wild:
            break;
        case BootstrapScheme::Kind::cluster:
            if (static_cast<long>(scheme.cluster_group.size()) != d.n) {
                throw InvalidInputError("cluster scheme does not match dataset rows");
            }
            break;
        case BootstrapScheme::Kind::block:
            if (scheme.block_length > d.n) {
                throw InvalidInputError("block length " + std::to_string(scheme.block_length) +
                                        " exceeds sample size " + std::to_string(d.n));
            }
            if (d.time) {
                const auto& t = *d.time;
                for (std::size_t i = 1; i < t.size(); ++i) {
                    if (t[i] != t[i - 1] + 1) {
                        throw InvalidInputError(
                            "block bootstrap requires a contiguous time index; gap at " +
                            std::to_string(t[i - 1]) + " -> " + std::to_string(t[i]));
                    }
                }
            } else {
                warnings.push_back(
                    "block bootstrap without a time column: treating file order as time order");
            }
            break;
    }
    return warnings;
}

}  // namespace brt
