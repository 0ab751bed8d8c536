#include <benchmark/benchmark.h>

#include "diffhmm/hmm.hpp"
#include "diffhmm/jump.hpp"
#include "diffhmm/kernels.hpp"

namespace {

struct Setup {
    diffhmm::DiffusionModel model = diffhmm::DiffusionModel::preset("ou1d");
    diffhmm::GridSpace grid;
    diffhmm::GeneratorMatrix Dh;

    explicit Setup(int n)
        : grid(diffhmm::GridSpace::build({{-6.0, 6.0}}, {n},
                                         [](const Eigen::VectorXd& x) {
                                             return 0.25 * x.squaredNorm();
                                         })),
          Dh(diffhmm::discretize_generator(model, grid)) {}
};

void BM_ResolventDirect(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(diffhmm::resolvent_direct(s.Dh, 1.0));
}

void BM_JumpSemigroup(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    auto Dk = diffhmm::jump_generator(diffhmm::resolvent_direct(s.Dh, 10.0), 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(diffhmm::jump_semigroup(Dk, 1.0));
}

void BM_FiniteRankApprox(benchmark::State& state) {
    Setup s(121);
    const double kappa = 10.0;
    auto Dk = diffhmm::jump_generator(diffhmm::resolvent_direct(s.Dh, kappa), kappa);
    diffhmm::KernelMatrix scaled{kappa * Dk.sourceResolvent.entries, kappa,
                                 diffhmm::KernelKind::Generic};
    auto V = s.grid.sample([](const Eigen::VectorXd& x) { return 0.25 * x.squaredNorm(); });
    auto W = s.grid.sample(
        [](const Eigen::VectorXd& x) { return 1.0 + x.squaredNorm() / 8.0; });
    auto plan = diffhmm::truncation_plan(scaled, V, W, 1e18, s.grid);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            diffhmm::finite_rank_approx(scaled, plan, static_cast<int>(state.range(0)),
                                        s.grid));
}

}  // namespace

BENCHMARK(BM_ResolventDirect)->Arg(121)->Arg(241);
BENCHMARK(BM_JumpSemigroup)->Arg(121);
BENCHMARK(BM_FiniteRankApprox)->Arg(8)->Arg(32)->Arg(64);
