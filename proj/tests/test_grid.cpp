#include <doctest.h>

#include <cmath>
#include <set>

#include "diffhmm/errors.hpp"
#include "diffhmm/grid.hpp"
#include "diffhmm/rng.hpp"

using namespace diffhmm;

namespace {

GridSpace flat_grid(double lo, double hi, int n) {
    return GridSpace::build({{lo, hi}}, {n}, [](const Eigen::VectorXd&) { return 0.0; });
}

// brute-force operator norm over random h with ||h||_v = 1; draws both
// interior points of the unit ball and its extreme points h_j = +- v_j,
// where a linear row functional attains its supremum
double brute_force_operator_norm(const Eigen::MatrixXd& K, const GridSpace& grid,
                                 int samples, Rng& rng) {
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd h(grid.size());
        const bool extreme = (s % 2 == 0);
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            const double u = extreme ? (rng.uniform() < 0.5 ? -1.0 : 1.0)
                                     : (2.0 * rng.uniform() - 1.0);
            h[i] = u * grid.weight(i);
        }
        h /= weighted_sup_norm(h, grid);
        best = std::max(best, weighted_sup_norm(K * h, grid));
    }
    return best;
}

}  // namespace

TEST_CASE("build_grid produces equally spaced nodes with unit weights for V = 0") {
    GridSpace g = flat_grid(-6.0, 6.0, 13);
    CHECK(g.size() == 13);
    CHECK(g.spacing(0) == doctest::Approx(1.0));
    for (Eigen::Index i = 0; i < 13; ++i) {
        CHECK(g.points()(i, 0) == doctest::Approx(-6.0 + static_cast<double>(i)));
        CHECK(g.weight(i) == doctest::Approx(1.0));
    }
}

TEST_CASE("build_grid min-shifts the weights so min v = 1") {
    GridSpace g = GridSpace::build({{-6.0, 6.0}}, {1201}, [](const Eigen::VectorXd& x) {
        return 0.25 * x.squaredNorm();
    });
    CHECK(g.weights().minCoeff() == doctest::Approx(1.0));
    CHECK(g.weight(1200) == doctest::Approx(std::exp(9.0)).epsilon(1e-12));
    CHECK(g.weight(0) == doctest::Approx(std::exp(9.0)).epsilon(1e-12));
}

TEST_CASE("build_grid 2-d box bookkeeping") {
    GridSpace g = GridSpace::build({{-2.0, 2.0}, {-2.0, 2.0}}, {41, 41},
                                   [](const Eigen::VectorXd&) { return 0.0; });
    CHECK(g.size() == 1681);
    CHECK(g.cellVolume() == doctest::Approx(0.01));
    const Eigen::Index center = g.nearest_node(Eigen::VectorXd::Zero(2));
    CHECK(g.points()(center, 0) == doctest::Approx(0.0));
    CHECK(g.points()(center, 1) == doctest::Approx(0.0));
}

TEST_CASE("build_grid rejects non-finite V naming the node") {
    CHECK_THROWS_WITH_AS(
        GridSpace::build({{-1.0, 1.0}}, {5},
                         [](const Eigen::VectorXd& x) { return std::log(x[0]); }),
        doctest::Contains("not finite"), PreconditionError);
    CHECK_THROWS_AS(flat_grid(0.0, 1.0, 2), PreconditionError);
}

TEST_CASE("weighted_sup_norm basics") {
    GridSpace g = GridSpace::build({{-1.0, 1.0}}, {3}, [](const Eigen::VectorXd& x) {
        return 3.0 * x.squaredNorm();
    });
    // v = {e^3, 1, e^3}
    CHECK(weighted_sup_norm(g.weights(), g) == doctest::Approx(1.0));
    CHECK(weighted_sup_norm(Eigen::VectorXd::Zero(3), g) == doctest::Approx(0.0));
    Eigen::VectorXd indicator = Eigen::VectorXd::Zero(3);
    indicator[0] = 1.0;
    CHECK(weighted_sup_norm(indicator, g) == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("weighted_sup_norm is a norm on random data") {
    GridSpace g = GridSpace::build({{-2.0, 2.0}}, {17}, [](const Eigen::VectorXd& x) {
        return x.squaredNorm();
    });
    Rng rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd a(17), b(17);
        for (int i = 0; i < 17; ++i) {
            a[i] = 2.0 * rng.uniform() - 1.0;
            b[i] = 2.0 * rng.uniform() - 1.0;
        }
        const double lambda = 4.0 * rng.uniform() - 2.0;
        CHECK(weighted_sup_norm(a + b, g) <=
              weighted_sup_norm(a, g) + weighted_sup_norm(b, g) + 1e-12);
        CHECK(weighted_sup_norm(lambda * a, g) ==
              doctest::Approx(std::abs(lambda) * weighted_sup_norm(a, g)));
    }
}

TEST_CASE("operator_norm_v closed cases") {
    GridSpace g = GridSpace::build({{-2.0, 2.0}}, {10}, [](const Eigen::VectorXd& x) {
        return 0.5 * x.squaredNorm();
    });
    const Eigen::Index n = g.size();
    CHECK(operator_norm_v(Eigen::MatrixXd::Identity(n, n), g) == doctest::Approx(1.0));
    CHECK(operator_norm_v(2.0 * Eigen::MatrixXd::Identity(n, n), g) == doctest::Approx(2.0));

    // every row equal to a probability vector pi: norm = sum pi_j v_j
    Rng rng(5, 0);
    Eigen::VectorXd pi(n);
    for (Eigen::Index i = 0; i < n; ++i) pi[i] = rng.uniform();
    pi /= pi.sum();
    const Eigen::MatrixXd K = Eigen::VectorXd::Ones(n) * pi.transpose();
    CHECK(operator_norm_v(K, g) == doctest::Approx(pi.dot(g.weights())));
}

TEST_CASE("operator_norm_v matches brute force within 1 percent") {
    GridSpace g = GridSpace::build({{-2.0, 2.0}}, {10}, [](const Eigen::VectorXd& x) {
        return 0.5 * x.squaredNorm();
    });
    Rng rng(7, 0);
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd K(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) K(i, j) = 2.0 * rng.uniform() - 0.5;
        const double exact = operator_norm_v(K, g);
        const double brute = brute_force_operator_norm(K, g, 10000, rng);
        CHECK(brute <= exact + 1e-12);
        CHECK(brute == doctest::Approx(exact).epsilon(0.01));
    }
}

TEST_CASE("operator_norm_v is sub-multiplicative on random nonnegative kernels") {
    GridSpace g = GridSpace::build({{0.0, 1.0}}, {20}, [](const Eigen::VectorXd& x) {
        return 2.0 * x[0];
    });
    Rng rng(13, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd K(20, 20), L(20, 20);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                K(i, j) = rng.uniform();
                L(i, j) = rng.uniform();
            }
        CHECK(operator_norm_v(K * L, g) <=
              operator_norm_v(K, g) * operator_norm_v(L, g) * (1.0 + 1e-12));
    }
}

TEST_CASE("measure_norm_v closed cases and brute force") {
    // v = e^x on [0, 1]: node 0 has v = 1, node 9 has v = e
    GridSpace g = GridSpace::build({{0.0, 1.0}}, {10},
                                   [](const Eigen::VectorXd& x) { return x[0]; });
    Eigen::VectorXd delta0 = Eigen::VectorXd::Zero(10);
    delta0[0] = 1.0;
    CHECK(measure_norm_v(delta0, g) == doctest::Approx(1.0));
    CHECK(measure_norm_v(Eigen::VectorXd::Zero(10), g) == doctest::Approx(0.0));

    Eigen::VectorXd diff = Eigen::VectorXd::Zero(10);
    diff[0] = 1.0;
    diff[9] = -1.0;
    const double exact = measure_norm_v(diff, g);
    CHECK(exact == doctest::Approx(1.0 + std::exp(1.0)));

    // brute-force dual form: sup |mu(h)| over ||h||_v <= 1
    Rng rng(17, 0);
    double brute = 0.0;
    for (int s = 0; s < 20000; ++s) {
        Eigen::VectorXd h(10);
        for (int i = 0; i < 10; ++i) h[i] = (2.0 * rng.uniform() - 1.0) * g.weight(i);
        h /= weighted_sup_norm(h, g);
        brute = std::max(brute, std::abs(diff.dot(h)));
    }
    CHECK(brute <= exact + 1e-12);
    CHECK(brute == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("sublevel_set picks the expected nodes") {
    GridSpace g = flat_grid(-6.0, 6.0, 13);
    FunctionVector F = g.sample([](const Eigen::VectorXd& x) { return x.squaredNorm(); });
    const auto idx = sublevel_set(F, 4.0);
    REQUIRE(idx.size() == 5);
    for (int i : idx) CHECK(std::abs(g.points()(i, 0)) <= 2.0);
    CHECK(sublevel_set(F, -1.0).empty());
    CHECK(sublevel_set(F, std::numeric_limits<double>::infinity()).size() == 13);
}

TEST_CASE("partition_compact splits a 1-d hull into uniform cells") {
    GridSpace g = flat_grid(-2.0, 2.0, 41);
    std::vector<int> hull(41);
    for (int i = 0; i < 41; ++i) hull[i] = i;

    CellPartition part = partition_compact(g, hull, 4);
    REQUIRE(part.cells.size() == 4);
    // nodes on box faces go to the lower cell, so the first cell picks up the
    // shared face node: sizes 11, 10, 10, 10
    CHECK(part.cells[0].size() == 11);
    CHECK(part.cells[1].size() == 10);
    CHECK(part.cells[2].size() == 10);
    CHECK(part.cells[3].size() == 10);
    CHECK(part.exterior.empty());

    SUBCASE("cells are disjoint and cover the hull") {
        std::set<int> seen;
        for (const auto& cell : part.cells)
            for (int i : cell) CHECK(seen.insert(i).second);
        CHECK(seen.size() == hull.size());
    }
}

TEST_CASE("partition_compact edge cases") {
    GridSpace g = flat_grid(-2.0, 2.0, 41);
    std::vector<int> hull;
    for (int i = 10; i <= 30; ++i) hull.push_back(i);

    CellPartition one = partition_compact(g, hull, 1);
    REQUIRE(one.cells.size() == 1);
    CHECK(one.cells[0].size() == hull.size());
    CHECK(one.exterior.size() == 41 - hull.size());

    CHECK_THROWS_AS(partition_compact(g, hull, 0), PreconditionError);
    CHECK_THROWS_AS(partition_compact(g, {}, 4), PreconditionError);
}

TEST_CASE("partition_compact covers a 2-d hull exactly") {
    GridSpace g = GridSpace::build({{-1.0, 1.0}, {-1.0, 1.0}}, {9, 9},
                                   [](const Eigen::VectorXd&) { return 0.0; });
    std::vector<int> hull;
    for (Eigen::Index i = 0; i < g.size(); ++i)
        if (g.node(i).norm() <= 0.8) hull.push_back(static_cast<int>(i));
    CellPartition part = partition_compact(g, hull, 3);
    std::set<int> seen;
    std::size_t total = 0;
    for (const auto& cell : part.cells) {
        CHECK(!cell.empty());
        total += cell.size();
        for (int i : cell) CHECK(seen.insert(i).second);
    }
    CHECK(total == hull.size());
    CHECK(total + part.exterior.size() == static_cast<std::size_t>(g.size()));
}
