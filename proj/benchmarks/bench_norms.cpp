#include <benchmark/benchmark.h>

#include "diffhmm/grid.hpp"
#include "diffhmm/rng.hpp"

namespace {

diffhmm::GridSpace make_grid(int n) {
    return diffhmm::GridSpace::build({{-6.0, 6.0}}, {n}, [](const Eigen::VectorXd& x) {
        return 0.25 * x.squaredNorm();
    });
}

Eigen::MatrixXd random_kernel(int n) {
    diffhmm::Rng rng(1, 0);
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K(i, j) = rng.uniform();
    return K;
}

void BM_OperatorNormV(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto grid = make_grid(n);
    auto K = random_kernel(n);
    for (auto _ : state) benchmark::DoNotOptimize(diffhmm::operator_norm_v(K, grid));
}

void BM_MeasureNormV(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto grid = make_grid(n);
    Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(diffhmm::measure_norm_v(mu, grid));
}

}  // namespace

BENCHMARK(BM_OperatorNormV)->Arg(121)->Arg(241)->Arg(481);
BENCHMARK(BM_MeasureNormV)->Arg(1201);

BENCHMARK_MAIN();
