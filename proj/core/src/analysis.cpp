#include "diffhmm/analysis.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "diffhmm/errors.hpp"
#include "diffhmm/sde.hpp"

namespace diffhmm {

std::vector<double> compare_resolvents(const std::vector<KernelMatrix>& Rfam,
                                       const std::vector<KernelMatrix>& Tfam,
                                       const GridSpace& grid) {
    if (Rfam.size() != Tfam.size()) throw PreconditionError("family size mismatch");
    std::vector<double> gaps;
    gaps.reserve(Rfam.size());
    for (std::size_t k = 0; k < Rfam.size(); ++k) {
        if (std::abs(Rfam[k].alpha - Tfam[k].alpha) > 1e-12)
            throw PreconditionError("alpha mismatch between families");
        gaps.push_back(operator_norm_v(Rfam[k].entries - Tfam[k].entries, grid));
    }
    return gaps;
}

SemigroupGaps compare_semigroups(const GeneratorMatrix& Dh, const JumpGenerator& Dk,
                                 const FiniteRankGenerator& gen, const FunctionVector& g,
                                 const std::vector<double>& times, const GridSpace& grid) {
    const Eigen::VectorXd Dg = Dh.entries * g.values;
    const Eigen::VectorXd D2g = Dh.entries * Dg;
    SemigroupGaps out;
    out.budget = weighted_sup_norm(g.values, grid) + weighted_sup_norm(D2g, grid);
    out.times = times;
    for (double t : times) {
        const Eigen::VectorXd Pg = (t * Dh.entries).exp() * g.values;
        const Eigen::VectorXd Pkg = (t * Dk.entries).exp() * g.values;
        const Eigen::VectorXd Qg = (t * gen.gridGenerator).exp() * g.values;
        out.full.push_back(weighted_sup_norm(Pg - Qg, grid));
        out.jumpStage.push_back(weighted_sup_norm(Pg - Pkg, grid));
        out.hmmStage.push_back(weighted_sup_norm(Pkg - Qg, grid));
    }
    return out;
}

Eigen::VectorXd invariant_measure(const GeneratorMatrix& Dh, const GridSpace& grid) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Dh.entries.transpose());
    lu.setThreshold(1e-9);
    const Eigen::MatrixXd null = lu.kernel();
    if (null.cols() != 1)
        throw NumericError("null space of D^T has dimension " + std::to_string(null.cols()) +
                           "; chain is reducible or the solve is degenerate");
    Eigen::VectorXd pi = null.col(0);
    if (pi.sum() < 0.0) pi = -pi;
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    const double residual = (Dh.entries.transpose() * pi).cwiseAbs().maxCoeff();
    if (residual > 1e-6 * Dh.entries.cwiseAbs().maxCoeff())
        throw NumericError("stationary residual too large");
    (void)grid;
    return pi;
}

Eigen::VectorXd invariant_measure_mc(const DiffusionModel& model, const GridSpace& grid,
                                     double T, double burnIn, double dt,
                                     std::uint64_t seed) {
    Rng rng(seed, 0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(model.dim());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(grid.size());
    double t = 0.0;
    while (t < T) {
        x = sde_endpoint(model, x, dt, dt, rng, grid.bounds());
        t += dt;
        if (t > burnIn) counts[grid.nearest_node(x)] += 1.0;
    }
    return counts / counts.sum();
}

double compare_invariant(const Eigen::VectorXd& pi, const Eigen::VectorXd& varpi,
                         const GridSpace& grid) {
    return measure_norm_v(pi - varpi, grid);
}

namespace {

void sort_by_modulus(std::vector<std::complex<double>>& ev) {
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return a.real() > b.real();
    });
}

}  // namespace

SpectrumReport spectrum(const Eigen::MatrixXd& K, const std::string& tag) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(K, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed on " + tag);
    SpectrumReport report;
    report.operatorTag = tag;
    report.rank = static_cast<int>(K.rows());
    report.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
    sort_by_modulus(report.eigenvalues);
    return report;
}

SpectrumReport spectrum_reduced(const FiniteRankGenerator& gen) {
    const Eigen::MatrixXd A =
        gen.kappa * (gen.r - Eigen::MatrixXd::Identity(gen.r.rows(), gen.r.cols()));
    SpectrumReport report = spectrum(A, "hmm_reduced");
    report.rank = static_cast<int>(gen.r.rows());
    return report;
}

ErgodicityEstimate ergodicity_rate(const Eigen::MatrixXd& G, const Eigen::VectorXd& pi,
                                   const std::vector<double>& times,
                                   const GridSpace& grid) {
    if (times.size() < 3) throw PreconditionError("need at least 3 time points");
    const Eigen::MatrixXd limit = Eigen::VectorXd::Ones(pi.size()) * pi.transpose();

    ErgodicityEstimate est;
    std::vector<double> logNorm;
    for (double t : times) {
        const double norm = operator_norm_v((t * G).exp() - limit, grid);
        if (!(norm > 0.0) || !std::isfinite(std::log(norm))) {
            est.degenerate = true;
            return est;
        }
        logNorm.push_back(std::log(norm));
    }

    // least squares for log-norm = B0 - b0 t
    const auto m = static_cast<double>(times.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        st += times[k];
        sy += logNorm[k];
        stt += times[k] * times[k];
        sty += times[k] * logNorm[k];
    }
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    est.b0 = -slope;
    est.B0 = (sy - slope * st) / m;
    double ss = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double r = logNorm[k] - (est.B0 - est.b0 * times[k]);
        ss += r * r;
    }
    est.fitResidual = std::sqrt(ss / m);
    if (est.b0 <= 0.0) est.degenerate = true;
    return est;
}

std::vector<PowerBoundRow> power_bound_check(const GeneratorMatrix& Dh, double bPrime,
                                             const std::vector<double>& alphas,
                                             const std::vector<int>& nList,
                                             const GridSpace& grid) {
    std::vector<PowerBoundRow> rows;
    const int maxN = *std::max_element(nList.begin(), nList.end());
    for (double alpha : alphas) {
        const KernelMatrix R = resolvent_direct(Dh, alpha);
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(R.entries.rows(), R.entries.cols());
        const Eigen::MatrixXd step = alpha * R.entries;
        for (int n = 1; n <= maxN; ++n) {
            power = power * step;
            if (std::find(nList.begin(), nList.end(), n) == nList.end()) continue;
            PowerBoundRow row;
            row.alpha = alpha;
            row.n = n;
            row.norm = operator_norm_v(power, grid);
            row.bound = 1.0 + bPrime;
            row.ok = row.norm <= row.bound + 1e-9;
            rows.push_back(row);
        }
    }
    return rows;
}

ConverseResult converse_lyapunov(const KernelMatrix& R,
                                 const std::vector<ConverseWitness>& witnesses,
                                 const DiffusionModel& model, const GridSpace& grid,
                                 int minorantCellsPerAxis) {
    if (witnesses.empty()) throw PreconditionError("need at least one witness");
    const Eigen::Index n = grid.size();

    ConverseResult out;
    for (const auto& w : witnesses) {
        const double gap = operator_norm_v(R.entries - w.T.kernel, grid);
        out.witnessGaps.push_back(gap);
        if (gap > std::pow(2.0, -w.n))
            throw PreconditionError("witness n = " + std::to_string(w.n) +
                                    " misses its gap: " + std::to_string(gap) + " > 2^-" +
                                    std::to_string(w.n));
    }

    // u- = v (1 + sum_n 1_{Y_n^c})
    Eigen::VectorXd multiplicity = Eigen::VectorXd::Ones(n);
    for (const auto& w : witnesses) {
        std::vector<char> inHull(n, 0);
        for (int i : w.hull) inHull[i] = 1;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!inHull[i]) multiplicity[i] += 1.0;
    }
    out.uMinus = FunctionVector(grid.weights().cwiseProduct(multiplicity), "u_minus");
    out.vMinus = FunctionVector(R.entries * out.uMinus.values, "v_minus");
    if ((out.vMinus.values.array() <= 0.0).any())
        throw NumericError("v_minus is not strictly positive");
    out.Vminus = FunctionVector(out.vMinus.values.array().log(), "V_minus");

    const Eigen::VectorXd ratio = out.uMinus.values.cwiseQuotient(out.vMinus.values);
    out.W = FunctionVector((ratio.array() - 1.0).max(1.0), "W_raw");
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.W[i] <= 1.0 + 1e-12) out.C.push_back(static_cast<int>(i));
    if (out.C.empty()) throw NumericError("converse set C = {W <= 1} is empty");

    // per-cell constant minorant of W over a uniform whole-box partition
    std::vector<int> all(n);
    for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = static_cast<int>(i);
    const CellPartition mcells = partition_compact(grid, all, minorantCellsPerAxis);
    Eigen::VectorXd wm = Eigen::VectorXd::Ones(n);
    for (const auto& cell : mcells.cells) {
        double lo = out.W[cell.front()];
        for (int i : cell) lo = std::min(lo, out.W[i]);
        for (int i : cell) wm[i] = std::max(1.0, lo);
    }
    out.Wminus = FunctionVector(std::move(wm), "W_minus");

    out.certificate =
        certify_dv3(model, out.Vminus, out.Wminus, 1.0, 2.0, out.C, grid);
    out.vMinusNorm = weighted_sup_norm(out.vMinus.values, grid);
    out.normBound = operator_norm_v(R.entries, grid) + 1.0;
    return out;
}

}  // namespace diffhmm
