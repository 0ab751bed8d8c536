#include "diffhmm/kernels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "diffhmm/csv.hpp"
#include "diffhmm/errors.hpp"
#include "diffhmm/parallel.hpp"
#include "diffhmm/rng.hpp"
#include "diffhmm/sde.hpp"

namespace diffhmm {

std::string kernel_kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::Resolvent: return "resolvent";
        case KernelKind::Semigroup: return "semigroup";
        case KernelKind::FiniteRank: return "finiteRank";
        case KernelKind::JumpResolvent: return "jumpResolvent";
        case KernelKind::Generic: return "generic";
    }
    return "generic";
}

GeneratorMatrix discretize_generator(const DiffusionModel& model, const GridSpace& grid) {
    const int d = grid.dim();
    const Eigen::Index n = grid.size();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);

    auto addRate = [&](Eigen::Index from, Eigen::Index to, double rate) {
        D(from, to) += rate;
        D(from, from) -= rate;
    };

    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd x = grid.node(i);
        const Eigen::VectorXd u = model.drift_at(x);
        const Eigen::MatrixXd S = model.sigma_at(x);
        const auto ix = grid.unflatten(i);

        const double cross = (d == 2) ? S(0, 1) : 0.0;

        for (int k = 0; k < d; ++k) {
            const double h = grid.spacing(k);
            // corner stencil borrows |Sigma_12|/2 from each axis term
            const double diffRate = (S(k, k) - std::abs(cross)) / (2.0 * h * h);
            if (diffRate < -1e-12) {
                std::ostringstream os;
                os << "mixed-derivative term dominates Sigma_" << k << k << " at node " << i
                   << "; no nonnegative stencil, refine the grid";
                throw NumericError(os.str());
            }
            const bool hasLo = ix[k] > 0;
            const bool hasHi = ix[k] < grid.resolution()[k] - 1;
            auto shift = [&](int dk) {
                auto jx = ix;
                jx[k] += dk;
                return grid.flatten(jx);
            };
            const double dpos = std::max(diffRate, 0.0);
            // reflecting closure: rates through a face are dropped
            if (hasHi) addRate(i, shift(+1), dpos + std::max(u[k], 0.0) / h);
            if (hasLo) addRate(i, shift(-1), dpos + std::max(-u[k], 0.0) / h);
        }

        if (d == 2 && cross != 0.0) {
            const double hx = grid.spacing(0), hy = grid.spacing(1);
            const double c = std::abs(cross) / (2.0 * hx * hy);
            // Sigma_12 > 0 pairs (+,+)/(-,-); Sigma_12 < 0 pairs (+,-)/(-,+)
            const int sy = cross > 0.0 ? +1 : -1;
            for (int sx : {+1, -1}) {
                auto jx = ix;
                jx[0] += sx;
                jx[1] += sx * sy;
                const bool inX = jx[0] >= 0 && jx[0] < grid.resolution()[0];
                const bool inY = jx[1] >= 0 && jx[1] < grid.resolution()[1];
                if (inX && inY) addRate(i, grid.flatten(jx), c);
            }
        }
    }

    GeneratorMatrix out;
    out.entries = std::move(D);
    out.rowSumZero = true;
    return out;
}

KernelMatrix resolvent_direct(const GeneratorMatrix& Dh, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("resolvent parameter must be positive");
    const Eigen::Index n = Dh.entries.rows();
    Eigen::MatrixXd A = alpha * Eigen::MatrixXd::Identity(n, n) - Dh.entries;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (lu.determinant() == 0.0)
        throw NumericError("singular shift alpha I - D (alpha = " + std::to_string(alpha) + ")");
    KernelMatrix R;
    R.entries = lu.solve(Eigen::MatrixXd::Identity(n, n));
    R.alpha = alpha;
    R.kind = KernelKind::Resolvent;
    return R;
}

McLaw resolvent_mc(const DiffusionModel& model, double alpha, const Eigen::VectorXd& x0,
                   std::int64_t nPaths, double dt, std::uint64_t seed,
                   const GridSpace& grid, int threads) {
    if (!(alpha > 0.0) || nPaths < 1) throw PreconditionError("need alpha > 0, nPaths >= 1");

    const Eigen::Index n = grid.size();
    constexpr std::int64_t kBlock = 1024;
    const std::int64_t nBlocks = (nPaths + kBlock - 1) / kBlock;
    std::vector<std::vector<std::int64_t>> counts(
        static_cast<std::size_t>(nBlocks), std::vector<std::int64_t>(n, 0));

    parallel_blocks(nPaths, kBlock, threads,
                    [&](std::int64_t block, std::int64_t begin, std::int64_t end) {
                        auto& local = counts[static_cast<std::size_t>(block)];
                        for (std::int64_t p = begin; p < end; ++p) {
                            Rng rng(seed, static_cast<std::uint64_t>(p));
                            const double T = rng.exponential(alpha);
                            Eigen::VectorXd xT = x0;
                            if (T > 0.0)
                                xT = sde_endpoint(model, x0, dt, T, rng, grid.bounds());
                            local[grid.nearest_node(xT)] += 1;
                        }
                    });

    Eigen::VectorXd prob = Eigen::VectorXd::Zero(n);
    for (const auto& local : counts)
        for (Eigen::Index j = 0; j < n; ++j) prob[j] += static_cast<double>(local[j]);
    prob /= static_cast<double>(nPaths);

    McLaw law;
    law.nPaths = nPaths;
    law.stderr_ =
        (prob.array() * (1.0 - prob.array()) / static_cast<double>(nPaths)).sqrt();
    law.prob = std::move(prob);
    return law;
}

double check_resolvent_equation(const KernelMatrix& Ra, const KernelMatrix& Rb,
                                const GridSpace& grid) {
    if (Ra.kind != KernelKind::Resolvent && Ra.kind != KernelKind::JumpResolvent)
        throw PreconditionError("first kernel is not a resolvent");
    if (Rb.kind != Ra.kind) throw PreconditionError("kernels are of different kinds");
    const double a = Ra.alpha, b = Rb.alpha;
    const Eigen::MatrixXd residual =
        Ra.entries - Rb.entries - (b - a) * (Rb.entries * Ra.entries);
    return operator_norm_v(residual, grid);
}

Eigen::MatrixXd resolvent_density(const KernelMatrix& R, const GridSpace& grid) {
    if (R.kind != KernelKind::Resolvent && R.kind != KernelKind::JumpResolvent)
        throw PreconditionError("kernel is not a resolvent");
    return R.entries / grid.cellVolume();
}

void kernel_to_csv(const KernelMatrix& K, const GridSpace& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw NumericError("cannot open " + path);
    out << "# kind=" << kernel_kind_name(K.kind) << " alpha=" << csv_double(K.alpha)
        << " dim=" << grid.dim() << " nodes=" << grid.size() << " resolution=";
    for (int k = 0; k < grid.dim(); ++k) out << (k ? "x" : "") << grid.resolution()[k];
    out << "\n";
    for (Eigen::Index i = 0; i < K.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < K.entries.cols(); ++j)
            out << (j ? "," : "") << csv_double(K.entries(i, j));
        out << "\n";
    }
}

}  // namespace diffhmm
