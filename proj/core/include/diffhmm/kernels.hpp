#pragma once

#include <cstdint>
#include <string>

#include "diffhmm/grid.hpp"
#include "diffhmm/model.hpp"

namespace diffhmm {

enum class KernelKind { Resolvent, Semigroup, FiniteRank, JumpResolvent, Generic };

std::string kernel_kind_name(KernelKind k);

/// Dense nonnegative kernel on the grid. For kind Resolvent with parameter
/// alpha the rows sum to 1/alpha.
struct KernelMatrix {
    Eigen::MatrixXd entries;
    double alpha = 0.0;  // resolvent parameter, 0 when not applicable
    KernelKind kind = KernelKind::Generic;
};

/// Discretized generator: a rate matrix (nonnegative off-diagonals, zero row
/// sums) standing in for D on the grid.
struct GeneratorMatrix {
    Eigen::MatrixXd entries;
    bool rowSumZero = true;
};

/// Finite-volume discretization of the generator. Diffusion by central
/// differences, drift by first-order upwinding so off-diagonals stay
/// nonnegative, reflecting closure at the box faces. In 2-d the mixed term
/// uses the corner stencil; if |Sigma_12| dominates a diagonal entry the
/// scheme has no nonnegative stencil and a NumericError names the node
/// (refine the grid or rotate the model).
GeneratorMatrix discretize_generator(const DiffusionModel& model, const GridSpace& grid);

/// R_alpha = (alpha I - D)^{-1} by dense LU.
KernelMatrix resolvent_direct(const GeneratorMatrix& Dh, double alpha);

/// Monte Carlo estimate of the probability row alpha R_alpha(x0, .): each
/// path runs to an independent Exp(alpha) horizon and its endpoint is binned
/// to the nearest node. `prob` sums to 1 exactly; `stderr` holds per-bin
/// binomial standard errors. Deterministic for fixed seed at any thread count.
struct McLaw {
    Eigen::VectorXd prob;
    Eigen::VectorXd stderr_;
    std::int64_t nPaths = 0;
};
McLaw resolvent_mc(const DiffusionModel& model, double alpha, const Eigen::VectorXd& x0,
                   std::int64_t nPaths, double dt, std::uint64_t seed,
                   const GridSpace& grid, int threads = 0);

/// v-norm residual of the resolvent equation
///   R_a - R_b - (b - a) R_b R_a.
double check_resolvent_equation(const KernelMatrix& Ra, const KernelMatrix& Rb,
                                const GridSpace& grid);

/// Density r(x, y) with R(x, dy) = r(x, y) dy: entries divided by cellVolume.
Eigen::MatrixXd resolvent_density(const KernelMatrix& R, const GridSpace& grid);

/// Row-major CSV dump with a metadata header (alpha, kind, grid shape).
void kernel_to_csv(const KernelMatrix& K, const GridSpace& grid, const std::string& path);

}  // namespace diffhmm
