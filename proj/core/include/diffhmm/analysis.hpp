#pragma once

#include <complex>
#include <string>
#include <vector>

#include "diffhmm/generator.hpp"
#include "diffhmm/grid.hpp"
#include "diffhmm/hmm.hpp"
#include "diffhmm/jump.hpp"
#include "diffhmm/kernels.hpp"

namespace diffhmm {

/// Per-alpha gaps ||| R_alpha - T_alpha |||_v. Families must live on the same
/// grid and carry matching parameters.
std::vector<double> compare_resolvents(const std::vector<KernelMatrix>& Rfam,
                                       const std::vector<KernelMatrix>& Tfam,
                                       const GridSpace& grid);

/// Semigroup gaps for one test function: full gap ||P^t g - Q^t g||_v plus the
/// two stages through the jump process (P^t vs P^t_kappa and P^t_kappa vs Q^t)
/// for diagnosing the two-stage bound. budget = ||g||_v + ||D^2 g||_v with
/// D^2 g = Dh (Dh g).
struct SemigroupGaps {
    std::vector<double> times;
    std::vector<double> full;
    std::vector<double> jumpStage;
    std::vector<double> hmmStage;
    double budget = 0.0;
};
SemigroupGaps compare_semigroups(const GeneratorMatrix& Dh, const JumpGenerator& Dk,
                                 const FiniteRankGenerator& gen, const FunctionVector& g,
                                 const std::vector<double>& times, const GridSpace& grid);

/// Invariant probability vector of the rate matrix: the unique left null
/// vector of Dh, normalized. Throws NumericError when the null space is not
/// one-dimensional (reducible chain).
Eigen::VectorXd invariant_measure(const GeneratorMatrix& Dh, const GridSpace& grid);

/// Occupation-time histogram of one long SDE path, as a cross-check of the
/// null-space solve. burnIn is discarded.
Eigen::VectorXd invariant_measure_mc(const DiffusionModel& model, const GridSpace& grid,
                                     double T, double burnIn, double dt,
                                     std::uint64_t seed);

/// || pi - varpi ||_v for two probability vectors.
double compare_invariant(const Eigen::VectorXd& pi, const Eigen::VectorXd& varpi,
                         const GridSpace& grid);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  // sorted by modulus desc
    std::string operatorTag;
    int rank = 0;
};
/// Full dense eigendecomposition, sorted by modulus (ties: real part desc).
SpectrumReport spectrum(const Eigen::MatrixXd& K, const std::string& tag);
/// Reduced N x N spectrum of kappa (r - I); resolvent spectra map by
/// lambda -> 1 / (alpha - lambda).
SpectrumReport spectrum_reduced(const FiniteRankGenerator& gen);

/// Fit of log ||| e^{tG} - 1 (x) pi |||_v against B0 - b0 t.
struct ErgodicityEstimate {
    double b0 = 0.0;
    double B0 = 0.0;
    double fitResidual = 0.0;  // RMS residual in log-norm units
    bool degenerate = false;   // zero norms or non-decaying data (b0 <= 0)
};
ErgodicityEstimate ergodicity_rate(const Eigen::MatrixXd& G, const Eigen::VectorXd& pi,
                                   const std::vector<double>& times, const GridSpace& grid);

/// ||| (alpha R_alpha)^n |||_v against the drift bound 1 + b'.
struct PowerBoundRow {
    double alpha = 0.0;
    int n = 0;
    double norm = 0.0;
    double bound = 0.0;
    bool ok = false;
};
std::vector<PowerBoundRow> power_bound_check(const GeneratorMatrix& Dh, double bPrime,
                                             const std::vector<double>& alphas,
                                             const std::vector<int>& nList,
                                             const GridSpace& grid);

/// One separability witness: a compact hull Y_n and a finite-rank kernel T_n
/// with ||| R - T_n |||_v <= 2^{-n}.
struct ConverseWitness {
    int n = 0;
    std::vector<int> hull;
    FiniteRankKernel T;
};

/// Drift pair recovered from separability witnesses:
///   u- = v (1 + sum_n 1_{Y_n^c}),   v- = R u-,   V- = log v-,
///   W  = max(u-/v- - 1, 1),         C  = { W <= 1 },
/// and W- the per-cell constant minorant of W (cells of a uniform whole-box
/// partition, minorantCellsPerAxis per axis). The returned certificate is
/// certify_dv3(V-, W-) with delta = 1, b = 2.
struct ConverseResult {
    FunctionVector uMinus;
    FunctionVector vMinus;
    FunctionVector Vminus;
    FunctionVector W;        // raw, before the minorant
    FunctionVector Wminus;
    std::vector<int> C;
    LyapunovCertificate certificate;
    double vMinusNorm = 0.0;   // || v- ||_v
    double normBound = 0.0;    // ||| R |||_v + 1
    std::vector<double> witnessGaps;
};
ConverseResult converse_lyapunov(const KernelMatrix& R,
                                 const std::vector<ConverseWitness>& witnesses,
                                 const DiffusionModel& model, const GridSpace& grid,
                                 int minorantCellsPerAxis);

}  // namespace diffhmm
