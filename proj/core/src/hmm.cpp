#include "diffhmm/hmm.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "diffhmm/errors.hpp"
#include "diffhmm/rng.hpp"

namespace diffhmm {

using nlohmann::json;

TruncationPlan truncation_plan(const KernelMatrix& R, const FunctionVector& V,
                               const FunctionVector& W, double r0, const GridSpace& grid,
                               bool constantW0) {
    if (V.size() != grid.size() || W.size() != grid.size())
        throw PreconditionError("V/W size mismatch with grid");

    const double vmin = V.values.minCoeff();
    const Eigen::VectorXd v = (V.values.array() - vmin).exp();

    TruncationPlan plan;
    plan.r0 = r0;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (v[i] <= r0 && W[i] <= r0) plan.Cr0.push_back(static_cast<int>(i));
    if (plan.Cr0.empty()) throw PreconditionError("truncation set C_{r0} is empty");

    Eigen::VectorXd w0 = Eigen::VectorXd::Ones(grid.size());
    if (!constantW0) w0 = W.values.array().pow(0.25).matrix();
    plan.W0 = FunctionVector(w0, "W0");
    plan.v0 = FunctionVector(w0.cwiseProduct(grid.weights()), "v0");

    // I_{W0} (R - I_C R I_C) I_{W0}, with I_F the multiplication kernel
    Eigen::MatrixXd trunc = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    for (int i : plan.Cr0)
        for (int j : plan.Cr0) trunc(i, j) = R.entries(i, j);
    Eigen::MatrixXd tail = R.entries - trunc;
    tail = w0.asDiagonal() * tail * w0.asDiagonal();
    plan.epsilonTail = operator_norm_weighted(tail, plan.v0.values);
    return plan;
}

FiniteRankKernel finite_rank_approx(const KernelMatrix& R, const TruncationPlan& plan,
                                    int cellsPerAxis, const GridSpace& grid) {
    if (plan.Cr0.empty()) throw PreconditionError("truncation set is empty");

    FiniteRankKernel out;
    out.cells = partition_compact(grid, plan.Cr0, cellsPerAxis);
    const int N = static_cast<int>(out.cells.cells.size());

    out.nu.reserve(N);
    for (const auto& cell : out.cells.cells) {
        Eigen::VectorXd nu = Eigen::VectorXd::Zero(grid.size());
        for (int i : cell) nu[i] = 1.0 / static_cast<double>(cell.size());
        out.nu.push_back(std::move(nu));
    }

    out.theta.resize(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            double mass = 0.0;
            for (int x : out.cells.cells[i])
                for (int y : out.cells.cells[j]) mass += R.entries(x, y);
            out.theta(i, j) = mass / static_cast<double>(out.cells.cells[i].size());
        }
    }
    out.rawRowMass = out.theta.rowwise().sum();
    for (int i = 0; i < N; ++i) {
        if (!(out.rawRowMass[i] > 0.0))
            throw NumericError("finite-rank row " + std::to_string(i) + " has no mass");
        out.theta.row(i) /= out.rawRowMass[i];
    }

    out.kernel = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    for (int i = 0; i < N; ++i) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(grid.size());
        for (int j = 0; j < N; ++j) row += out.theta(i, j) * out.nu[j].transpose();
        for (int x : out.cells.cells[i]) out.kernel.row(x) = row;
    }

    Eigen::MatrixXd diff = R.entries - out.kernel;
    out.rawGap = operator_norm_v(diff, grid);
    diff = plan.W0.values.asDiagonal() * diff * plan.W0.values.asDiagonal();
    out.weightedGap = operator_norm_weighted(diff, plan.v0.values);
    return out;
}

FiniteRankGenerator build_hmm_generator(const FiniteRankKernel& T, double kappa,
                                        const JumpGenerator& Dk, const GridSpace& grid) {
    if (!(kappa > 0.0)) throw PreconditionError("kappa must be positive");
    const int N = static_cast<int>(T.theta.rows());
    const Eigen::Index n = grid.size();

    FiniteRankGenerator gen;
    gen.kappa = kappa;
    gen.cells = T.cells;
    gen.nu = T.nu;
    gen.gridSize = n;
    gen.r = T.theta;

    // the construction requires every r_ij strictly positive
    if ((gen.r.array() <= 0.0).any()) {
        gen.mixWeight = 1e-6;
        gen.r = (1.0 - gen.mixWeight) * gen.r +
                gen.mixWeight * Eigen::MatrixXd::Constant(N, N, 1.0 / N);
    }

    // r~ embeds the exterior row: state 0 -> nu_1
    Eigen::MatrixXd rTilde = Eigen::MatrixXd::Zero(N + 1, N + 1);
    rTilde(0, 1) = 1.0;
    rTilde.block(1, 1, N, N) = gen.r;
    gen.qMatrix = -kappa * (Eigen::MatrixXd::Identity(N + 1, N + 1) - rTilde);

    gen.gridGenerator = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < N; ++i) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        for (int j = 0; j < N; ++j) row += gen.r(i, j) * gen.nu[j].transpose();
        for (int x : gen.cells.cells[i]) gen.gridGenerator.row(x) = row;
    }
    for (int x : gen.cells.exterior) gen.gridGenerator.row(x) = gen.nu[0].transpose();
    gen.gridGenerator = kappa * (gen.gridGenerator - Eigen::MatrixXd::Identity(n, n));

    gen.generatorGap = operator_norm_v(Dk.entries - gen.gridGenerator, grid);
    return gen;
}

Eigen::VectorXd hmm_semigroup_coeffs(const Eigen::MatrixXd& r, double kappa,
                                     const Eigen::VectorXd& p, double t) {
    if (t < 0.0) throw PreconditionError("time must be nonnegative");
    if (std::abs(p.sum() - 1.0) > 1e-9)
        throw PreconditionError("initial hidden distribution must sum to 1");
    // marginal ODE: pdot = kappa (r^T - I) p
    const Eigen::MatrixXd A =
        kappa * (r.transpose() - Eigen::MatrixXd::Identity(r.rows(), r.cols()));
    return ((t * A).exp() * p).eval();
}

Eigen::VectorXd hmm_semigroup_coeffs(const FiniteRankGenerator& gen,
                                     const Eigen::VectorXd& p, double t) {
    return hmm_semigroup_coeffs(gen.r, gen.kappa, p, t);
}

HmmResolvent hmm_resolvent(const FiniteRankGenerator& gen, double alpha, double bv,
                           double eps0, const GridSpace& grid) {
    const double threshold = (1.0 + bv) * eps0;
    if (!(alpha > threshold))
        throw ValidityError("alpha = " + std::to_string(alpha) +
                                " is outside the validity region alpha > (1+bv) eps0 = " +
                                std::to_string(threshold),
                            threshold);
    HmmResolvent out;
    out.kernel = hmm_resolvent_inverse(gen, alpha);
    out.normV = operator_norm_v(out.kernel.entries, grid);
    out.bound = (1.0 + bv) / (alpha - threshold);
    out.boundSatisfied = out.normV <= out.bound + 1e-9;
    return out;
}

KernelMatrix hmm_resolvent_inverse(const FiniteRankGenerator& gen, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    if (gen.gridGenerator.size() == 0)
        throw PreconditionError("generator has no grid-level kernel (loaded from file?)");
    const Eigen::Index n = gen.gridGenerator.rows();
    const Eigen::MatrixXd A =
        alpha * Eigen::MatrixXd::Identity(n, n) - gen.gridGenerator;
    KernelMatrix out;
    out.entries =
        Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(Eigen::MatrixXd::Identity(n, n));
    out.alpha = alpha;
    out.kind = KernelKind::Resolvent;
    return out;
}

HmmPath simulate_hmm(const FiniteRankGenerator& gen, int i0, double T,
                     std::uint64_t seed) {
    if (!(T > 0.0)) throw PreconditionError("horizon must be positive");
    const int N = static_cast<int>(gen.r.rows());
    if (i0 < 0 || i0 > N) throw PreconditionError("initial hidden state out of range");

    // per-cell observation sampler over the support of nu_k
    std::vector<std::vector<int>> support(N);
    std::vector<std::vector<double>> weights(N);
    for (int k = 0; k < N; ++k)
        for (Eigen::Index j = 0; j < gen.nu[k].size(); ++j)
            if (gen.nu[k][j] > 0.0) {
                support[k].push_back(static_cast<int>(j));
                weights[k].push_back(gen.nu[k][j]);
            }

    Rng rng(seed, 0);
    HmmPath path;
    path.times.push_back(0.0);
    path.hidden.push_back(i0);
    path.obsNodes.push_back(-1);

    double t = 0.0;
    int state = i0;
    for (;;) {
        t += rng.exponential(gen.kappa);  // uniformized clock: every row of q has total rate kappa
        if (t > T) break;
        if (state == 0) {
            state = 1;
        } else {
            state = 1 + rng.discrete(gen.r.row(state - 1), N);
        }
        const int k = state - 1;
        const int obs = support[k][rng.discrete(weights[k], static_cast<int>(weights[k].size()))];
        path.times.push_back(t);
        path.hidden.push_back(state);
        path.obsNodes.push_back(obs);
    }
    return path;
}

HmmStationary hmm_stationary(const FiniteRankGenerator& gen, const GridSpace& grid) {
    const int N = static_cast<int>(gen.r.rows());
    // pbar r = pbar with sum pbar = 1; strict positivity of r makes it unique
    Eigen::MatrixXd A = gen.r.transpose() - Eigen::MatrixXd::Identity(N, N);
    A.row(N - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    rhs[N - 1] = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd pbar = lu.solve(rhs);
    const double residual = (gen.r.transpose() * pbar - pbar).cwiseAbs().maxCoeff();
    if (!pbar.allFinite() || residual > 1e-8)
        throw NumericError("stationary solve failed (reducible hidden chain?)");
    pbar /= pbar.sum();

    HmmStationary out;
    out.hidden = pbar;
    out.grid = Eigen::VectorXd::Zero(grid.size());
    for (int i = 0; i < N; ++i) out.grid += pbar[i] * gen.nu[i];
    return out;
}

void save_hmm(const FiniteRankGenerator& gen, const std::string& path) {
    json doc;
    doc["kappa"] = gen.kappa;
    doc["gridSize"] = gen.gridSize;
    doc["generatorGap"] = gen.generatorGap;
    doc["mixWeight"] = gen.mixWeight;
    doc["cells"] = gen.cells.cells;
    doc["exterior"] = gen.cells.exterior;
    json nus = json::array();
    for (const auto& nu : gen.nu) {
        json entry = json::array();
        for (Eigen::Index j = 0; j < nu.size(); ++j)
            if (nu[j] > 0.0) entry.push_back({j, nu[j]});
        nus.push_back(std::move(entry));
    }
    doc["nu"] = std::move(nus);
    auto matrix_to_json = [](const Eigen::MatrixXd& m) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    doc["r"] = matrix_to_json(gen.r);
    doc["q"] = matrix_to_json(gen.qMatrix);

    std::ofstream out(path);
    if (!out) throw NumericError("cannot open " + path);
    out << doc.dump(1) << "\n";
}

FiniteRankGenerator load_hmm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NumericError("cannot open " + path);
    json doc = json::parse(in);

    FiniteRankGenerator gen;
    gen.kappa = doc.at("kappa").get<double>();
    gen.gridSize = doc.at("gridSize").get<Eigen::Index>();
    gen.generatorGap = doc.at("generatorGap").get<double>();
    gen.mixWeight = doc.at("mixWeight").get<double>();
    gen.cells.cells = doc.at("cells").get<std::vector<std::vector<int>>>();
    gen.cells.exterior = doc.at("exterior").get<std::vector<int>>();
    for (const auto& cell : gen.cells.cells)
        gen.cells.hull.insert(gen.cells.hull.end(), cell.begin(), cell.end());
    std::sort(gen.cells.hull.begin(), gen.cells.hull.end());

    for (const auto& entry : doc.at("nu")) {
        Eigen::VectorXd nu = Eigen::VectorXd::Zero(gen.gridSize);
        for (const auto& pair : entry)
            nu[pair.at(0).get<Eigen::Index>()] = pair.at(1).get<double>();
        gen.nu.push_back(std::move(nu));
    }

    auto matrix_from_json = [](const json& rows) {
        const auto nr = static_cast<Eigen::Index>(rows.size());
        const auto nc = static_cast<Eigen::Index>(rows.at(0).size());
        Eigen::MatrixXd m(nr, nc);
        for (Eigen::Index i = 0; i < nr; ++i)
            for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = rows.at(i).at(j).get<double>();
        return m;
    };
    gen.r = matrix_from_json(doc.at("r"));
    gen.qMatrix = matrix_from_json(doc.at("q"));
    return gen;
}

}  // namespace diffhmm
