#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace diffhmm {

constexpr int kMaxDim = 2;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// A function sampled on the grid nodes.
struct FunctionVector {
    Eigen::VectorXd values;
    std::string label;

    FunctionVector() = default;
    FunctionVector(Eigen::VectorXd v, std::string name = "")
        : values(std::move(v)), label(std::move(name)) {}

    double operator[](Eigen::Index i) const { return values[i]; }
    Eigen::Index size() const { return values.size(); }
};

/// Regular tensor grid on a box in R^d (d = 1 or 2) carrying the weight
/// function v = exp(V - min V), so min v = 1 exactly. All weighted norms in
/// the library are taken with respect to these node weights.
class GridSpace {
public:
    /// Build a grid with at least 3 nodes per axis. V must be finite on every
    /// node; the weights are min-shifted so the smallest equals 1.
    static GridSpace build(const std::vector<Interval>& bounds,
                           const std::vector<int>& resolution,
                           const std::function<double(const Eigen::VectorXd&)>& V);

    int dim() const { return dim_; }
    Eigen::Index size() const { return points_.rows(); }
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::VectorXd node(Eigen::Index i) const { return points_.row(i).transpose(); }
    const std::vector<Interval>& bounds() const { return bounds_; }
    const std::vector<int>& resolution() const { return res_; }
    double spacing(int axis) const { return spacing_[axis]; }
    double cellVolume() const { return cellVolume_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double weight(Eigen::Index i) const { return weights_[i]; }
    /// Amount subtracted from V so that min v = 1.
    double vShift() const { return vShift_; }

    /// Flattened index of the node with per-axis indices ix (row-major,
    /// axis 0 slowest).
    Eigen::Index flatten(const std::array<int, kMaxDim>& ix) const;
    std::array<int, kMaxDim> unflatten(Eigen::Index i) const;

    /// Index of the grid node nearest to an arbitrary point (clamped to the box).
    Eigen::Index nearest_node(const Eigen::VectorXd& x) const;

    /// Evaluate a scalar field on all nodes.
    FunctionVector sample(const std::function<double(const Eigen::VectorXd&)>& f,
                          const std::string& label = "") const;

private:
    int dim_ = 0;
    std::vector<Interval> bounds_;
    std::vector<int> res_;
    std::vector<double> spacing_;
    double cellVolume_ = 0.0;
    Eigen::MatrixXd points_;   // one row per node
    Eigen::VectorXd weights_;  // v = exp(V - vShift), >= 1
    double vShift_ = 0.0;
};

/// ||g||_v = max_i |g_i| / v_i.
double weighted_sup_norm(const Eigen::VectorXd& g, const GridSpace& grid);
inline double weighted_sup_norm(const FunctionVector& g, const GridSpace& grid) {
    return weighted_sup_norm(g.values, grid);
}

/// Induced operator norm of a kernel matrix: max_i sum_j |K_ij| v_j / v_i.
/// Exact on a grid: the supremum over ||h||_v <= 1 is attained at
/// h_j = sign(K_ij) v_j row by row.
double operator_norm_v(const Eigen::MatrixXd& K, const GridSpace& grid);

/// Same induced norm with an explicit positive weight vector (used for the
/// v0 = W0 v norms of the truncation analysis).
double operator_norm_weighted(const Eigen::MatrixXd& K, const Eigen::VectorXd& w);

/// Dual norm of a signed measure given by per-node masses: sum_j |mu_j| v_j.
double measure_norm_v(const Eigen::VectorXd& mu, const GridSpace& grid);

/// Node indices where F <= r.
std::vector<int> sublevel_set(const FunctionVector& F, double r);

/// Disjoint cells covering a compact hull of nodes, plus the exterior.
struct CellPartition {
    std::vector<std::vector<int>> cells;  // C_1..C_N as node-index lists
    std::vector<int> exterior;            // C_0
    std::vector<int> hull;                // union of cells, sorted
};

/// Split the bounding box of `hull` into at most cellsPerAxis^d uniform boxes
/// intersected with the hull; empty boxes are dropped. Nodes on a box face are
/// assigned to the lower-index cell (ties toward -inf per axis).
CellPartition partition_compact(const GridSpace& grid, const std::vector<int>& hull,
                                int cellsPerAxis);

}  // namespace diffhmm
