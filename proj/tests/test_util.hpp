#pragma once

#include "brt/dataset.hpp"
#include "brt/linalg.hpp"
#include "brt/rng.hpp"

#include <string>

namespace brt::testutil {

inline Matrix random_matrix(Rng& rng, long rows, long cols) {
    Matrix A(rows, cols);
    for (long j = 0; j < cols; ++j) {
        for (long i = 0; i < rows; ++i) A(i, j) = rng.next_normal();
    }
    return A;
}

/// Synthetic first-stage dataset X = Z Pi + W Gamma + noise.
inline Dataset synthetic_dataset(Rng& rng, long n, int m, int k, int l, const Matrix& Pi,
                                 double noise_sd = 1.0) {
    Dataset d;
    d.n = n;
    d.n_source = n;
    d.Z = random_matrix(rng, n, m);
    d.W.resize(n, l);
    if (l > 0) {
        d.W.col(0).setOnes();
        for (int j = 1; j < l; ++j) d.W.col(j) = random_matrix(rng, n, 1);
        d.has_constant = true;
    }
    Matrix noise = noise_sd * random_matrix(rng, n, k);
    d.X = d.Z * Pi + noise;
    if (l > 0) d.X += d.W * random_matrix(rng, l, k) * 0.5;
    for (int j = 0; j < k; ++j) d.x_names.push_back("x" + std::to_string(j));
    for (int j = 0; j < m; ++j) d.z_names.push_back("z" + std::to_string(j));
    for (int j = 0; j < l; ++j) d.w_names.push_back(j == 0 ? "_cons" : "w" + std::to_string(j));
    return d;
}

inline std::string data_path(const std::string& name) {
    return std::string(BRT_TEST_DATA_DIR) + "/" + name;
}

}  // namespace brt::testutil
