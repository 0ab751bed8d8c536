#include <benchmark/benchmark.h>

#include "diffhmm/rng.hpp"
#include "diffhmm/sde.hpp"

namespace {

void BM_SdeEndpoint(benchmark::State& state) {
    auto model = diffhmm::DiffusionModel::preset("ou1d");
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    const std::vector<diffhmm::Interval> box{{-6.0, 6.0}};
    const double dt = 1.0 / static_cast<double>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        diffhmm::Rng rng(9, stream++);
        benchmark::DoNotOptimize(diffhmm::sde_endpoint(model, x0, dt, 1.0, rng, box));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RngNormal(benchmark::State& state) {
    diffhmm::Rng rng(3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}

}  // namespace

BENCHMARK(BM_SdeEndpoint)->Arg(1000)->Arg(4000);
BENCHMARK(BM_RngNormal);
