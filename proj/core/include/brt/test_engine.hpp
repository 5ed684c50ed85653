#pragma once

#include "brt/bootstrap.hpp"
#include "brt/dataset.hpp"
#include "brt/linalg.hpp"
#include "brt/rank_select.hpp"
#include "brt/regression.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace brt {

struct TestConfig {
    std::optional<int> r;        ///< hypothesized rank; default k - 1
    double alpha = 0.05;
    double beta = 0.005;
    std::optional<double> kappa_n;  ///< default n_source^{-1/4}
    int B = 1000;
    BootstrapScheme scheme = BootstrapScheme::wild();
    std::uint64_t seed = 12345;
    bool run_analytic = false;   ///< the cfa option
    bool allrank = false;
};

/// Second step of the two-step approach; the statistic, p-value and critical
/// value are absent when the first step already rejected.
struct TwoStepResult {
    int rank_estimate = 0;
    bool first_step_rejected = false;
    std::optional<double> statistic;
    std::optional<double> p_value;
    std::optional<double> critical_value;
    bool reject = false;
};

struct AnalyticResult {
    int rank_estimate = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    double critical_value = 0.0;
    bool reject = false;
};

struct AllRankRow {
    int r = 0;
    TwoStepResult two_step;
    std::optional<AnalyticResult> analytic;
};

struct TestReport {
    double statistic = 0.0;  ///< n_source * phi(Pi_hat, r) at the reported r
    int r = 0;               ///< hypothesized rank the scalar sections refer to
    TwoStepResult two_step;
    std::optional<AnalyticResult> analytic;
    std::optional<std::vector<AllRankRow>> allrank_table;
    std::vector<KpResult> kp_trail;   ///< sequential scan behind the rank estimate
    std::vector<std::string> warnings;

    // reproducibility echo
    long n = 0;
    long n_source = 0;
    int m = 0;
    int k = 0;
    int B = 0;
    std::uint64_t seed = 0;
    std::string scheme_name;
    int block_length = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double kappa_n = 0.0;
};

/// n * phi(Pi_hat, r); `scale_n` is the dataset's statistic scaling count.
double statistic(const FirstStageFit& fit, long scale_n, int r);

/// Applies tail_blocks at r_hat once, then projected_phi to every draw,
/// in draw order.
std::vector<double> bootstrap_law(const BootstrapDraws& draws, const SvdResult& svd_fit, int r,
                                  int r_hat);

/// The floor(B * level)-th order statistic of the law in ascending order
/// (the empirical level-quantile); the minimum when floor(B * level) = 0.
double critical_value(const std::vector<double>& law, double level);

/// Fraction of draws at or above the observed statistic.
double p_value(const std::vector<double>& law, double observed);

/// Full run: fit, draws, both decision rules, optional all-rank sweep.
/// One set of draws is shared between the two-step and analytic branches and
/// across all-rank rows.
TestReport run_test(const Dataset& d, const TestConfig& cfg);

}  // namespace brt
