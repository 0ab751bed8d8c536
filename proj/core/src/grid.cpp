#include "diffhmm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffhmm/errors.hpp"

namespace diffhmm {

GridSpace GridSpace::build(const std::vector<Interval>& bounds,
                           const std::vector<int>& resolution,
                           const std::function<double(const Eigen::VectorXd&)>& V) {
    if (bounds.empty() || bounds.size() > kMaxDim)
        throw PreconditionError("grid dimension must be 1 or 2");
    if (bounds.size() != resolution.size())
        throw PreconditionError("bounds/resolution size mismatch");

    GridSpace g;
    g.dim_ = static_cast<int>(bounds.size());
    g.bounds_ = bounds;
    g.res_ = resolution;
    g.cellVolume_ = 1.0;
    Eigen::Index n = 1;
    for (int k = 0; k < g.dim_; ++k) {
        if (resolution[k] < 3) throw PreconditionError("resolution must be >= 3 per axis");
        if (!(bounds[k].hi > bounds[k].lo)) throw PreconditionError("empty axis interval");
        g.spacing_.push_back(bounds[k].width() / (resolution[k] - 1));
        g.cellVolume_ *= g.spacing_[k];
        n *= resolution[k];
    }

    g.points_.resize(n, g.dim_);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index rem = i;
        for (int k = g.dim_ - 1; k >= 0; --k) {
            const Eigen::Index ik = rem % g.res_[k];
            rem /= g.res_[k];
            g.points_(i, k) = bounds[k].lo + static_cast<double>(ik) * g.spacing_[k];
        }
    }

    Eigen::VectorXd raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double vi = V(g.node(i));
        if (!std::isfinite(vi)) {
            std::ostringstream os;
            os << "V is not finite at node (";
            for (int k = 0; k < g.dim_; ++k) os << (k ? ", " : "") << g.points_(i, k);
            os << ")";
            throw PreconditionError(os.str());
        }
        raw[i] = vi;
    }
    g.vShift_ = raw.minCoeff();
    g.weights_ = (raw.array() - g.vShift_).exp();
    return g;
}

Eigen::Index GridSpace::flatten(const std::array<int, kMaxDim>& ix) const {
    Eigen::Index i = 0;
    for (int k = 0; k < dim_; ++k) i = i * res_[k] + ix[k];
    return i;
}

std::array<int, kMaxDim> GridSpace::unflatten(Eigen::Index i) const {
    std::array<int, kMaxDim> ix{0, 0};
    for (int k = dim_ - 1; k >= 0; --k) {
        ix[k] = static_cast<int>(i % res_[k]);
        i /= res_[k];
    }
    return ix;
}

Eigen::Index GridSpace::nearest_node(const Eigen::VectorXd& x) const {
    std::array<int, kMaxDim> ix{0, 0};
    for (int k = 0; k < dim_; ++k) {
        const double u = (x[k] - bounds_[k].lo) / spacing_[k];
        int i = static_cast<int>(std::lround(u));
        i = std::clamp(i, 0, res_[k] - 1);
        ix[k] = i;
    }
    return flatten(ix);
}

FunctionVector GridSpace::sample(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const std::string& label) const {
    Eigen::VectorXd out(size());
    for (Eigen::Index i = 0; i < size(); ++i) out[i] = f(node(i));
    return FunctionVector(std::move(out), label);
}

double weighted_sup_norm(const Eigen::VectorXd& g, const GridSpace& grid) {
    if (g.size() != grid.size()) throw PreconditionError("vector/grid size mismatch");
    return (g.cwiseAbs().cwiseQuotient(grid.weights())).maxCoeff();
}

double operator_norm_v(const Eigen::MatrixXd& K, const GridSpace& grid) {
    if (K.rows() != grid.size() || K.cols() != grid.size())
        throw PreconditionError("kernel/grid size mismatch");
    const Eigen::VectorXd rowMass = K.cwiseAbs() * grid.weights();
    return (rowMass.cwiseQuotient(grid.weights())).maxCoeff();
}

double operator_norm_weighted(const Eigen::MatrixXd& K, const Eigen::VectorXd& w) {
    if (K.rows() != w.size() || K.cols() != w.size())
        throw PreconditionError("kernel/weight size mismatch");
    const Eigen::VectorXd rowMass = K.cwiseAbs() * w;
    return (rowMass.cwiseQuotient(w)).maxCoeff();
}

double measure_norm_v(const Eigen::VectorXd& mu, const GridSpace& grid) {
    if (mu.size() != grid.size()) throw PreconditionError("measure/grid size mismatch");
    return mu.cwiseAbs().dot(grid.weights());
}

std::vector<int> sublevel_set(const FunctionVector& F, double r) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < F.size(); ++i)
        if (F[i] <= r) idx.push_back(static_cast<int>(i));
    return idx;
}

CellPartition partition_compact(const GridSpace& grid, const std::vector<int>& hull,
                                int cellsPerAxis) {
    if (hull.empty()) throw PreconditionError("hull is empty");
    if (cellsPerAxis < 1) throw PreconditionError("cellsPerAxis must be >= 1");

    const int d = grid.dim();
    std::array<double, kMaxDim> lo{0, 0}, wid{1, 1};
    for (int k = 0; k < d; ++k) {
        double mn = grid.points()(hull.front(), k), mx = mn;
        for (int i : hull) {
            mn = std::min(mn, grid.points()(i, k));
            mx = std::max(mx, grid.points()(i, k));
        }
        lo[k] = mn;
        // degenerate axis (single plane of nodes) gets one cell
        wid[k] = (mx > mn) ? (mx - mn) / cellsPerAxis : 1.0;
    }

    // box index per axis; nodes exactly on a face go to the lower box
    auto boxOf = [&](double x, int k) {
        const double u = (x - lo[k]) / wid[k];
        int b = static_cast<int>(std::floor(u));
        const double frac = u - std::floor(u);
        if (frac < 1e-9 && b > 0) b -= 1;
        return std::clamp(b, 0, cellsPerAxis - 1);
    };

    std::vector<std::vector<int>> boxes(
        static_cast<std::size_t>(std::pow(cellsPerAxis, d)));
    std::vector<char> inHull(grid.size(), 0);
    for (int i : hull) {
        inHull[i] = 1;
        Eigen::Index b = 0;
        for (int k = 0; k < d; ++k) b = b * cellsPerAxis + boxOf(grid.points()(i, k), k);
        boxes[b].push_back(i);
    }

    CellPartition part;
    for (auto& cell : boxes)
        if (!cell.empty()) part.cells.push_back(std::move(cell));
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (!inHull[i]) part.exterior.push_back(static_cast<int>(i));
    part.hull = hull;
    std::sort(part.hull.begin(), part.hull.end());
    return part;
}

}  // namespace diffhmm
