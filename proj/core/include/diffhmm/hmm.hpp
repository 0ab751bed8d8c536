#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diffhmm/grid.hpp"
#include "diffhmm/jump.hpp"
#include "diffhmm/kernels.hpp"

namespace diffhmm {

/// Truncation of a kernel to the compact set C_{r0} = C_v(r0) n C_W(r0),
/// with the damping weight W0 and the enlarged norm weight v0 = W0 v used to
/// measure the tail left outside.
struct TruncationPlan {
    double r0 = 0.0;
    std::vector<int> Cr0;
    FunctionVector W0;  // W^{1/4} by default (constant 1 optional)
    FunctionVector v0;  // W0 * v
    double epsilonTail = 0.0;  // ||| I_{W0} (R - I_C R I_C) I_{W0} |||_{v0}
};

/// Build the truncation data for kernel R. V and W come from a drift
/// certificate; v = exp(V - min V) matches the grid weights. W0 = W^{1/4}
/// satisfies ||W0^2||_W <= 1 and grows strictly slower than W^{1/2};
/// `constantW0` replaces it by 1 (both choices are admissible).
TruncationPlan truncation_plan(const KernelMatrix& R, const FunctionVector& V,
                               const FunctionVector& W, double r0, const GridSpace& grid,
                               bool constantW0 = false);

/// Finite-rank probabilistic kernel T = sum_ij theta_ij 1_{C_i} (x) nu_j with
/// uniform in-cell measures nu_j. theta averages the exact kernel mass
/// R(x, C_j) over x in C_i and rows are then normalized so T is probabilistic
/// on the hull (the <= epsilon tail mass is absorbed by the normalization).
struct FiniteRankKernel {
    CellPartition cells;
    Eigen::MatrixXd theta;              // N x N, row-stochastic
    std::vector<Eigen::VectorXd> nu;    // per-cell probability vectors on the grid
    Eigen::MatrixXd kernel;             // grid-level T (exterior rows zero)
    Eigen::VectorXd rawRowMass;         // theta row sums before normalization
    double weightedGap = 0.0;           // ||| I_{W0} (R - T) I_{W0} |||_{v0}
    double rawGap = 0.0;                // ||| R - T |||_v
};
FiniteRankKernel finite_rank_approx(const KernelMatrix& R, const TruncationPlan& plan,
                                    int cellsPerAxis, const GridSpace& grid);

/// Finite-rank generator E = kappa [ -I + 1_{C_0} (x) nu_1 + sum r_ij 1_{C_i} (x) nu_j ]
/// together with the (N+1) x (N+1) hidden-chain rate matrix
/// q = -kappa (I - r~), where row 0 of r~ sends the exterior to nu_1.
struct FiniteRankGenerator {
    double kappa = 0.0;
    Eigen::MatrixXd r;                // N x N row-stochastic, strictly positive
    std::vector<Eigen::VectorXd> nu;  // grid-level cell measures
    CellPartition cells;
    Eigen::MatrixXd qMatrix;          // (N+1) x (N+1)
    Eigen::MatrixXd gridGenerator;    // E on the grid (empty after load_hmm)
    double generatorGap = 0.0;        // measured ||| D_kappa - E |||_v
    double mixWeight = 0.0;           // uniform mixing applied to keep r > 0
    Eigen::Index gridSize = 0;

    int hiddenStates() const { return static_cast<int>(r.rows()) + 1; }
};

/// Assemble the generator from a finite-rank kernel built on the kappa-scaled
/// chain (pass T constructed from kappa R_kappa, not from R_1, when
/// kappa != 1). Zero entries of r are removed by mixing with the uniform
/// matrix at weight 1e-6; the construction requires strictly positive r_ij.
FiniteRankGenerator build_hmm_generator(const FiniteRankKernel& T, double kappa,
                                        const JumpGenerator& Dk, const GridSpace& grid);

/// Hidden-state distribution at time t: p(t) solves pdot = kappa (r^T - I) p,
/// i.e. the marginal of the chain with rate matrix kappa(r - I).
Eigen::VectorXd hmm_semigroup_coeffs(const Eigen::MatrixXd& r, double kappa,
                                     const Eigen::VectorXd& p, double t);
Eigen::VectorXd hmm_semigroup_coeffs(const FiniteRankGenerator& gen,
                                     const Eigen::VectorXd& p, double t);

/// Resolvent T_alpha = (alpha I - E)^{-1}, valid for alpha > (1+bv) eps0 where
/// eps0 is the measured generator gap; throws ValidityError below the
/// threshold. normV and bound record the checked inequality
/// ||| T_alpha |||_v <= (1+bv) / (alpha - (1+bv) eps0).
struct HmmResolvent {
    KernelMatrix kernel;
    double normV = 0.0;
    double bound = 0.0;
    bool boundSatisfied = false;
};
HmmResolvent hmm_resolvent(const FiniteRankGenerator& gen, double alpha, double bv,
                           double eps0, const GridSpace& grid);

/// Plain inverse (alpha I - E)^{-1} with no norm claim, for configurations
/// whose measured gap puts alpha outside the validity region.
KernelMatrix hmm_resolvent_inverse(const FiniteRankGenerator& gen, double alpha);

/// Uniformized simulation of the HMM: events on an Exp(kappa) clock, hidden
/// transitions by r~ (self-moves allowed), a fresh observation drawn from
/// nu_k at every event entering state k >= 1. State 0 jumps to state 1.
struct HmmPath {
    std::vector<double> times;
    std::vector<int> hidden;
    std::vector<int> obsNodes;  // -1 while in the exterior state before any draw
};
HmmPath simulate_hmm(const FiniteRankGenerator& gen, int i0, double T, std::uint64_t seed);

/// Stationary law: hidden weights solving pbar r = pbar on {1..N} (state 0 is
/// transient), mapped to the grid as varpi = sum pbar_i nu_i.
struct HmmStationary {
    Eigen::VectorXd hidden;  // pbar over {1..N}
    Eigen::VectorXd grid;    // varpi as per-node masses
};
HmmStationary hmm_stationary(const FiniteRankGenerator& gen, const GridSpace& grid);

/// Structured-text round trip (kappa, cells, nu supports, r, q); enough to
/// re-simulate without the original grid kernels.
void save_hmm(const FiniteRankGenerator& gen, const std::string& path);
FiniteRankGenerator load_hmm(const std::string& path);

}  // namespace diffhmm
