#include <benchmark/benchmark.h>

#include "brt/bootstrap.hpp"
#include "brt/linalg.hpp"
#include "brt/regression.hpp"
#include "brt/rng.hpp"
#include "brt/test_engine.hpp"

using namespace brt;

namespace {

Matrix random_matrix(Rng& rng, long rows, long cols) {
    Matrix A(rows, cols);
    for (long j = 0; j < cols; ++j) {
        for (long i = 0; i < rows; ++i) A(i, j) = rng.next_normal();
    }
    return A;
}

Dataset make_dataset(long n, int m, int k) {
    Rng rng(1);
    Dataset d;
    d.n = n;
    d.n_source = n;
    d.Z = random_matrix(rng, n, m);
    d.W = Matrix::Ones(n, 1);
    d.has_constant = true;
    d.X = d.Z * random_matrix(rng, m, k) * 0.2 + random_matrix(rng, n, k);
    for (int j = 0; j < k; ++j) d.x_names.push_back("x");
    for (int j = 0; j < m; ++j) d.z_names.push_back("z");
    d.w_names = {"_cons"};
    return d;
}

}  // namespace

static void BM_FullSvd(benchmark::State& state) {
    Rng rng(2);
    Matrix A = random_matrix(rng, state.range(0), state.range(0) / 2);
    for (auto _ : state) {
        SvdResult s = svd(A);
        benchmark::DoNotOptimize(s.sigma);
    }
}
BENCHMARK(BM_FullSvd)->Arg(8)->Arg(32)->Arg(128);

static void BM_FirstStageFit(benchmark::State& state) {
    Dataset d = make_dataset(state.range(0), 6, 2);
    for (auto _ : state) {
        FirstStageFit fit = fit_first_stage(d);
        benchmark::DoNotOptimize(fit.Pi_hat);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FirstStageFit)->Range(256, 1 << 16)->Complexity();

static void BM_BootstrapDraws(benchmark::State& state) {
    Dataset d = make_dataset(state.range(0), 6, 2);
    FirstStageFit fit = fit_first_stage(d);
    for (auto _ : state) {
        BootstrapDraws draws = run(fit, d, BootstrapScheme::wild(), 100, 7);
        benchmark::DoNotOptimize(draws.Omega_hat);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BootstrapDraws)->Range(256, 1 << 14)->Complexity();

static void BM_FullTwoStepRun(benchmark::State& state) {
    Dataset d = make_dataset(1000, 6, 2);
    TestConfig cfg;
    cfg.B = static_cast<int>(state.range(0));
    cfg.run_analytic = true;
    for (auto _ : state) {
        TestReport rep = run_test(d, cfg);
        benchmark::DoNotOptimize(rep.statistic);
    }
}
BENCHMARK(BM_FullTwoStepRun)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
