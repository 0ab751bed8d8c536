#include <doctest.h>

#include <cmath>

#include "diffhmm/errors.hpp"
#include "diffhmm/jump.hpp"
#include "test_helpers.hpp"

using namespace diffhmm;
using diffhmm::testing::kBPrimeOu;
using diffhmm::testing::ou_setup;
using diffhmm::testing::point1d;

namespace {

struct JumpSetup {
    diffhmm::testing::OuSetup base;
    GeneratorMatrix Dh;
    JumpGenerator Dk;
};

JumpSetup jump_setup(double kappa, double L = 6.0, int n = 121) {
    auto base = ou_setup(L, n);
    GeneratorMatrix Dh = discretize_generator(base.model, base.grid);
    JumpGenerator Dk = jump_generator(resolvent_direct(Dh, kappa), kappa);
    return {std::move(base), std::move(Dh), std::move(Dk)};
}

}  // namespace

TEST_CASE("jump generator rows sum to zero and match D (kappa R_kappa)") {
    auto s = jump_setup(10.0);
    CHECK(s.Dk.entries.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-8);
    const Eigen::MatrixXd viaCommute =
        s.Dh.entries * (10.0 * s.Dk.sourceResolvent.entries);
    CHECK(operator_norm_v(s.Dk.entries - viaCommute, s.base.grid) <= 1e-6);
    for (Eigen::Index i = 0; i < s.Dk.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < s.Dk.entries.cols(); ++j)
            if (i != j) CHECK(s.Dk.entries(i, j) >= -1e-12);
}

TEST_CASE("zero generator gives a zero jump generator") {
    GeneratorMatrix zero;
    zero.entries = Eigen::MatrixXd::Zero(7, 7);
    JumpGenerator Dk = jump_generator(resolvent_direct(zero, 3.0), 3.0);
    CHECK(Dk.entries.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("jump_generator validates the resolvent parameter") {
    auto s = ou_setup(6.0, 61);
    GeneratorMatrix Dh = discretize_generator(s.model, s.grid);
    KernelMatrix R5 = resolvent_direct(Dh, 5.0);
    CHECK_THROWS_AS(jump_generator(R5, 6.0), PreconditionError);
}

TEST_CASE("jump resolvent: series and direct inverse coincide") {
    auto s = jump_setup(10.0);
    KernelMatrix Rk = resolvent_direct(s.Dh, 10.0);
    JumpResolventResult res = jump_resolvent_series(Rk, 10.0, 1.0, 1e-6, s.base.grid);
    CHECK(res.kernel.kind == KernelKind::JumpResolvent);
    CHECK(res.seriesGap <= 10.0 * 1e-6);
    CHECK((res.kernel.entries.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-8);
    CHECK(operator_norm_v(res.kernel.entries, s.base.grid) <= (1.0 + kBPrimeOu) / 1.0);
}

TEST_CASE("jump-vs-diffusion resolvent bound with the OU constant") {
    auto s = jump_setup(10.0);
    KernelMatrix R1 = resolvent_direct(s.Dh, 1.0);
    KernelMatrix Rk1 = jump_resolvent_direct(s.Dk, 1.0);
    JumpBoundCheck chk = verify_rrapprox_bound(R1, Rk1, kBPrimeOu, 10.0, s.base.grid);
    CHECK(chk.passed);
    CHECK(chk.bound == doctest::Approx(4.0 * (1.0 + kBPrimeOu) / 10.0));
    CHECK(chk.measured < 0.1 * chk.bound);

    SUBCASE("bound halves exactly when kappa doubles") {
        auto s20 = jump_setup(20.0);
        KernelMatrix Rk20 = jump_resolvent_direct(s20.Dk, 1.0);
        JumpBoundCheck chk20 =
            verify_rrapprox_bound(R1, Rk20, kBPrimeOu, 20.0, s.base.grid);
        CHECK(chk20.bound == doctest::Approx(chk.bound / 2.0));
    }
    SUBCASE("alpha = kappa is accepted, alpha > kappa rejected") {
        KernelMatrix R10 = resolvent_direct(s.Dh, 10.0);
        KernelMatrix Rk10 = jump_resolvent_direct(s.Dk, 10.0);
        CHECK_NOTHROW(verify_rrapprox_bound(R10, Rk10, kBPrimeOu, 10.0, s.base.grid));
        KernelMatrix R11 = resolvent_direct(s.Dh, 10.5);
        KernelMatrix Rk11 = jump_resolvent_direct(s.Dk, 10.5);
        CHECK_THROWS_AS(verify_rrapprox_bound(R11, Rk11, kBPrimeOu, 10.0, s.base.grid),
                        PreconditionError);
    }
}

TEST_CASE("measured jump gap decays like 1/kappa") {
    auto base = ou_setup(6.0, 241);
    GeneratorMatrix Dh = discretize_generator(base.model, base.grid);
    KernelMatrix R1 = resolvent_direct(Dh, 1.0);
    std::vector<double> gaps;
    for (double kappa : {5.0, 10.0, 20.0, 40.0}) {
        JumpGenerator Dk = jump_generator(resolvent_direct(Dh, kappa), kappa);
        gaps.push_back(operator_norm_v(jump_resolvent_direct(Dk, 1.0).entries - R1.entries,
                                       base.grid));
    }
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        const double ratio = gaps[k] / gaps[k + 1];
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
    }
}

TEST_CASE("jump semigroup: stochastic rows, two algorithms agree") {
    auto s = jump_setup(10.0);
    KernelMatrix P0 = jump_semigroup(s.Dk, 0.0);
    CHECK((P0.entries - Eigen::MatrixXd::Identity(P0.entries.rows(), P0.entries.cols()))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    for (double t : {0.5, 2.0}) {
        KernelMatrix Pt = jump_semigroup(s.Dk, t);
        CHECK((Pt.entries.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-8);
        CHECK(Pt.entries.minCoeff() >= -1e-12);
        KernelMatrix Ut = jump_semigroup_uniformized(s.Dk, t);
        CHECK((Pt.entries - Ut.entries).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("jump semigroup property") {
    auto s = jump_setup(10.0);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.1, 0.2}, {0.5, 0.5}}) {
        const Eigen::MatrixXd lhs =
            jump_semigroup(s.Dk, a).entries * jump_semigroup(s.Dk, b).entries;
        const Eigen::MatrixXd rhs = jump_semigroup(s.Dk, a + b).entries;
        CHECK(operator_norm_v(lhs - rhs, s.base.grid) <= 1e-7);
    }
}

TEST_CASE("resolvent of the jump process matches its Laplace transform by quadrature") {
    auto s = jump_setup(10.0);
    const double alpha = 1.0;
    const double T = 40.0 / alpha;
    const int panels = 400;  // composite Simpson
    const double dt = T / (2 * panels);
    const Eigen::MatrixXd Pstep = jump_semigroup(s.Dk, dt).entries;
    Eigen::MatrixXd power =
        Eigen::MatrixXd::Identity(Pstep.rows(), Pstep.cols());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(Pstep.rows(), Pstep.cols());
    for (int k = 0; k <= 2 * panels; ++k) {
        const double t = k * dt;
        double w = (k == 0 || k == 2 * panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += (w * dt / 3.0 * std::exp(-alpha * t)) * power;
        if (k < 2 * panels) power = power * Pstep;
    }
    KernelMatrix Rka = jump_resolvent_direct(s.Dk, alpha);
    CHECK(operator_norm_v(acc - Rka.entries, s.base.grid) <= 1e-3);
}

TEST_CASE("simulate_jump: Poisson jump counts and one-step law") {
    auto s = jump_setup(10.0, 6.0, 61);
    const Eigen::Index x0 = s.base.grid.nearest_node(point1d(0.0));
    const int runs = 2000;
    double totalJumps = 0.0;
    for (int r = 0; r < runs; ++r) {
        JumpPath path = simulate_jump(s.Dk, x0, 5.0, 1000 + r);
        totalJumps += static_cast<double>(path.nodes.size() - 1);
    }
    const double mean = totalJumps / runs;
    const double se = std::sqrt(50.0 / runs);
    CHECK(std::abs(mean - 50.0) <= 4.0 * se);
}

TEST_CASE("simulate_jump marginal matches the matrix semigroup row") {
    auto s = jump_setup(10.0, 6.0, 61);
    const Eigen::Index x0 = s.base.grid.nearest_node(point1d(0.0));
    const double t = 0.5;
    const int runs = 20000;
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(s.base.grid.size());
    for (int r = 0; r < runs; ++r)
        counts[simulate_jump(s.Dk, x0, t, 555 + r).nodes.back()] += 1.0;
    counts /= static_cast<double>(runs);
    const Eigen::VectorXd law = jump_semigroup(s.Dk, t).entries.row(x0).transpose();
    for (Eigen::Index j = 0; j < counts.size(); ++j) {
        const double se =
            std::sqrt(law[j] * (1.0 - law[j]) / runs + std::pow(3.0 / runs, 2));
        CHECK(std::abs(counts[j] - law[j]) <= 4.5 * se);
    }
}

TEST_CASE("jump drift certificate closed form and limits") {
    auto s = jump_setup(10.0, 6.0, 61);
    JumpDriftCertificate cert = jump_drift_certificate(1.0, 1.5, 10.0, s.Dk, s.base.grid);
    CHECK(cert.deltaKappa == doctest::Approx(10.0 / 11.0));
    CHECK(cert.bKappa == doctest::Approx(15.0 / 11.0));
    CHECK(cert.deltaKappa < 1.0);
    CHECK(cert.bKappa < 1.5 * 10.0);

    SUBCASE("delta_kappa increases toward delta as kappa grows") {
        double prev = 0.0;
        for (double kappa : {1.0, 2.0, 5.0, 20.0, 100.0}) {
            const double dk = 1.0 * kappa / (1.0 + kappa);
            CHECK(dk > prev);
            prev = dk;
        }
        CHECK(prev < 1.0);
    }
    SUBCASE("positivity of the arguments is required") {
        CHECK_THROWS_AS(jump_drift_certificate(0.0, 1.5, 10.0, s.Dk, s.base.grid),
                        PreconditionError);
    }
}

TEST_CASE("jump drift verification needs the relaxed constant b'") {
    // with the raw DV3 constant b = 3/2 the inequality fails near the origin
    // (D_kappa v there is ~ 1/2 - 1/(4 kappa), above (b - delta) kappa/(1+kappa));
    // the relaxed constant b' = b sup_C v makes it hold everywhere
    auto s = jump_setup(10.0, 6.0, 241);
    JumpDriftCertificate raw = jump_drift_certificate(1.0, 1.5, 10.0, s.Dk, s.base.grid);
    CHECK(!raw.verified);
    CHECK(std::abs(s.base.grid.points()(raw.worstNode, 0)) <= 2.0);

    JumpDriftCertificate relaxed =
        jump_drift_certificate(1.0, kBPrimeOu, 10.0, s.Dk, s.base.grid);
    CHECK(relaxed.verified);
}
