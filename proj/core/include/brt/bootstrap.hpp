#pragma once

#include "brt/dataset.hpp"
#include "brt/linalg.hpp"
#include "brt/regression.hpp"
#include "brt/rng.hpp"

#include <cstdint>
#include <vector>

namespace brt {

/// Residual resampling scheme. Exactly one kind is active; the cluster kind
/// carries the per-row group indices, the block kind its block length.
struct BootstrapScheme {
    enum class Kind { wild, cluster, block };

    Kind kind = Kind::wild;
    int block_length = 0;              ///< block only
    std::vector<int> cluster_group;    ///< cluster only: group index per row
    int n_clusters = 0;                ///< cluster only

    static BootstrapScheme wild();
    static BootstrapScheme cluster(const Dataset& d);
    static BootstrapScheme block(int length);

    const char* name() const;
};

/// The B centered, scaled bootstrap estimates and their flattened covariance.
struct BootstrapDraws {
    int B = 0;
    std::vector<Matrix> M_star;  ///< B matrices m x k, sqrt(n_source)*(Pi*_b - Pi)
    Matrix Omega_hat;            ///< (mk) x (mk) sample covariance of vec(M*),
                                 ///< column-major flattening
};

/// Row weights for the wild scheme: one standard normal per row.
Vector wild_weights(Rng& rng, long n);

/// Row weights for the cluster scheme: one Rademacher draw per cluster in
/// first-appearance order, broadcast to member rows.
Vector cluster_weights(Rng& rng, const BootstrapScheme& scheme, long n);

/// Moving-block resample: ceil(n/L) block starts uniform on [0, n-L],
/// contiguous blocks concatenated and truncated to n rows.
std::vector<long> block_row_indices(Rng& rng, long n, int block_length);

/// Residuals with each row scaled by its weight (the same weight across all
/// k columns of the row).
Matrix apply_row_weights(const Matrix& residuals, const Vector& weights);

/// One perturbed residual matrix u* under the given scheme.
Matrix perturb_residuals(const Matrix& residuals, const BootstrapScheme& scheme, Rng& rng);

/// One draw M* = sqrt(n_source) * (Pi* - Pi_hat). Z and W are held fixed, so
/// Pi* - Pi_hat = (Z'M_W Z)^{-1} Z'M_W u* and the fitted part drops out.
Matrix draw(const FirstStageFit& fit, const Dataset& d, const BootstrapScheme& scheme, Rng& rng);

/// B draws on deterministic per-index substreams of `seed`, plus Omega_hat.
BootstrapDraws run(const FirstStageFit& fit, const Dataset& d, const BootstrapScheme& scheme,
                   int B, std::uint64_t seed);

/// Validates scheme/dataset compatibility (cluster ids present, block length
/// in range, contiguous time for block). Returns warnings for soft issues.
std::vector<std::string> validate_scheme(const BootstrapScheme& scheme, const Dataset& d);

}  // namespace brt
