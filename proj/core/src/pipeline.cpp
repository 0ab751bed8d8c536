#include "diffhmm/pipeline.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "diffhmm/analysis.hpp"
#include "diffhmm/csv.hpp"
#include "diffhmm/errors.hpp"
#include "diffhmm/generator.hpp"
#include "diffhmm/parallel.hpp"
#include "diffhmm/sde.hpp"

namespace diffhmm {

using nlohmann::json;

namespace {

std::uint64_t substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t run) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1) + run;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct CertifyData {
    GridSpace grid;
    DiffusionModel model;
    FunctionVector V, W;
    std::vector<int> C;
    LyapunovCertificate cert;
};

CertifyData run_certify(const RunConfig& cfg) {
    if (!cfg.lyapunov) throw ConfigError("config: missing 'lyapunov' block");
    const auto& ly = *cfg.lyapunov;
    CertifyData data{cfg.build_grid(), cfg.model.build(), {}, {}, {}, {}};
    data.V = eval_poly_on_grid(ly.V, data.grid, "V");
    data.W = eval_poly_on_grid(ly.W, data.grid, "W");
    data.C = ball_node_set(data.grid, ly.cRadius);
    if (data.C.empty()) throw ConfigError("config: 'lyapunov.cRadius' contains no node");
    const double supCv = sup_v_on_ball(ly.V, data.grid, ly.cRadius);
    data.cert = certify_dv3(data.model, data.V, data.W, ly.delta, ly.b, data.C, data.grid,
                            -1.0, supCv);
    return data;
}

FunctionVector make_test_function(const TestFunctionConfig& tf, const GridSpace& grid) {
    return grid.sample(
        [&tf](const Eigen::VectorXd& x) {
            return poly_eval(tf.poly, x) * std::exp(-tf.gaussFactor * x.squaredNorm());
        },
        "g");
}

void write_summary(const std::string& outDir, json summary, const RunConfig& cfg) {
    summary["config"] = json::parse(config_to_text(cfg));
    if (!cfg.warnings.empty()) summary["warnings"] = cfg.warnings;
    std::ofstream out(join_path(outDir, "summary.json"));
    if (!out) throw NumericError("cannot open summary.json in " + outDir);
    out << summary.dump(1) << "\n";
}

void write_spectrum_csv(const SpectrumReport& report, const std::string& outDir) {
    CsvWriter csv(join_path(outDir, "spectrum_" + report.operatorTag + ".csv"),
                  {"index", "re", "im", "modulus"});
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
        const auto& ev = report.eigenvalues[k];
        csv.row({std::to_string(k), csv_double(ev.real()), csv_double(ev.imag()),
                 csv_double(std::abs(ev))});
    }
}

std::string node_coords(const GridSpace& grid, Eigen::Index i) {
    std::string s = csv_double(grid.points()(i, 0));
    for (int k = 1; k < grid.dim(); ++k) s += ";" + csv_double(grid.points()(i, k));
    return s;
}

struct LadderData {
    GeneratorMatrix Dh;
    JumpGenerator Dk;
    KernelMatrix scaled;  // kappa R_kappa, the kernel the construction truncates
    TruncationPlan plan;
    FiniteRankKernel T;
    FiniteRankGenerator gen;
};

/// Resolvent ladder shared by approximate/spectrum/simulate: discretize,
/// build the jump generator at kappa, truncate the kappa-scaled chain and
/// assemble the finite-rank generator.
LadderData build_ladder(const RunConfig& cfg, const CertifyData& cert) {
    if (!cfg.approximation) throw ConfigError("config: missing 'approximation' block");
    const auto& ap = *cfg.approximation;

    LadderData lad;
    lad.Dh = discretize_generator(cert.model, cert.grid);
    lad.Dk = jump_generator(resolvent_direct(lad.Dh, ap.kappa), ap.kappa);

    lad.scaled.entries = ap.kappa * lad.Dk.sourceResolvent.entries;
    lad.scaled.alpha = ap.kappa;
    lad.scaled.kind = KernelKind::Generic;

    double r0 = ap.r0;
    if (!(r0 > 0.0)) {
        // whole box: every node enters the truncation set
        r0 = std::max(cert.grid.weights().maxCoeff(), cert.W.values.maxCoeff()) + 1.0;
    }
    lad.plan = truncation_plan(lad.scaled, cert.V, cert.W, r0, cert.grid, ap.constantW0);
    lad.T = finite_rank_approx(lad.scaled, lad.plan, ap.cellsPerAxis, cert.grid);
    lad.gen = build_hmm_generator(lad.T, ap.kappa, lad.Dk, cert.grid);
    return lad;
}

}  // namespace

int cmd_certify(const RunConfig& cfg, const PipelineOptions& opt) {
    const std::string outDir = opt.outDir.empty() ? cfg.output : opt.outDir;
    ensure_dir(outDir);
    const CertifyData data = run_certify(cfg);
    const GridSpace& grid = data.grid;

    std::vector<char> inC(grid.size(), 0);
    for (int i : data.C) inC[i] = 1;
    CsvWriter csv(join_path(outDir, "certificate.csv"),
                  {"node", "x", "V", "W", "inC", "slack"});
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        csv.row({std::to_string(i), node_coords(grid, i), csv_double(data.V[i]),
                 csv_double(data.W[i]), inC[i] ? "1" : "0", csv_double(data.cert.slack[i])});

    json summary;
    summary["command"] = "certify";
    summary["passed"] = data.cert.passed;
    summary["worstSlack"] = data.cert.worstSlack;
    summary["worstNode"] = data.cert.worstNode;
    summary["tol"] = data.cert.tol;
    summary["delta"] = data.cert.delta;
    summary["b"] = data.cert.b;
    summary["bPrime"] = data.cert.bPrime;
    write_summary(outDir, std::move(summary), cfg);
    return data.cert.passed ? kExitPass : kExitUnmet;
}

int cmd_approximate(const RunConfig& cfg, const PipelineOptions& opt) {
    const std::string outDir = opt.outDir.empty() ? cfg.output : opt.outDir;
    ensure_dir(outDir);
    const CertifyData cert = run_certify(cfg);
    const GridSpace& grid = cert.grid;
    const auto& ap = *cfg.approximation;

    if (!cert.cert.passed) {
        json summary;
        summary["command"] = "approximate";
        summary["passed"] = false;
        summary["reason"] = "drift certificate failed";
        summary["worstSlack"] = cert.cert.worstSlack;
        summary["worstNode"] = cert.cert.worstNode;
        write_summary(outDir, std::move(summary), cfg);
        return kExitUnmet;
    }

    const LadderData lad = build_ladder(cfg, cert);
    const double bPrime = cert.cert.bPrime;

    // resolvent families over the alpha grid
    const std::vector<double> alphas = cfg.alpha_grid();
    std::vector<KernelMatrix> Rfam, Tfam;
    std::vector<double> tNorm, tBound, tThreshold;
    std::vector<char> tChecked;
    for (double a : alphas) {
        Rfam.push_back(resolvent_direct(lad.Dh, a));
        const double threshold = (1.0 + bPrime) * lad.gen.generatorGap;
        tThreshold.push_back(threshold);
        if (a > threshold) {
            HmmResolvent hr = hmm_resolvent(lad.gen, a, bPrime, lad.gen.generatorGap, grid);
            Tfam.push_back(hr.kernel);
            tNorm.push_back(hr.normV);
            tBound.push_back(hr.bound);
            tChecked.push_back(1);
        } else {
            // measured generator gap puts alpha outside the inverse-representation
            // region; fall back to the plain inverse and skip the norm claim
            KernelMatrix Ta = hmm_resolvent_inverse(lad.gen, a);
            tNorm.push_back(operator_norm_v(Ta.entries, grid));
            tBound.push_back(std::numeric_limits<double>::quiet_NaN());
            tChecked.push_back(0);
            Tfam.push_back(std::move(Ta));
        }
        Tfam.back().alpha = a;
    }
    const std::vector<double> resolventGaps = compare_resolvents(Rfam, Tfam, grid);

    {
        CsvWriter csv(join_path(outDir, "resolvent_gaps.csv"),
                      {"alpha", "gap", "target", "passed"});
        for (std::size_t k = 0; k < alphas.size(); ++k)
            csv.row({csv_double(alphas[k]), csv_double(resolventGaps[k]),
                     csv_double(ap.epsResolvent),
                     resolventGaps[k] <= ap.epsResolvent ? "1" : "0"});
    }
    {
        CsvWriter csv(join_path(outDir, "hmm_resolvent_norms.csv"),
                      {"alpha", "normV", "lemmaBound", "validityThreshold", "boundChecked"});
        for (std::size_t k = 0; k < alphas.size(); ++k)
            csv.row({csv_double(alphas[k]), csv_double(tNorm[k]), csv_double(tBound[k]),
                     csv_double(tThreshold[k]), tChecked[k] ? "1" : "0"});
    }

    // measured-vs-bound table across the kappa sweep
    std::vector<double> sweep = ap.kappaSweep;
    if (sweep.empty()) sweep = {5.0, 10.0, 20.0, 40.0};
    if (std::find(sweep.begin(), sweep.end(), ap.kappa) == sweep.end())
        sweep.push_back(ap.kappa);
    std::sort(sweep.begin(), sweep.end());
    {
        CsvWriter csv(join_path(outDir, "jump_bounds.csv"),
                      {"kappa", "alpha", "measured", "bound", "passed"});
        for (double k : sweep) {
            const JumpGenerator Dk = jump_generator(resolvent_direct(lad.Dh, k), k);
            for (double a : alphas) {
                if (a > k) continue;
                const KernelMatrix Rka = jump_resolvent_direct(Dk, a);
                const KernelMatrix& Ra =
                    Rfam[static_cast<std::size_t>(std::find(alphas.begin(), alphas.end(), a) -
                                                  alphas.begin())];
                const JumpBoundCheck chk = verify_rrapprox_bound(Ra, Rka, bPrime, k, grid);
                csv.row({csv_double(k), csv_double(a), csv_double(chk.measured),
                         csv_double(chk.bound), chk.passed ? "1" : "0"});
            }
        }
    }

    // invariant measures
    const Eigen::VectorXd pi = invariant_measure(lad.Dh, grid);
    const HmmStationary stat = hmm_stationary(lad.gen, grid);
    const double measureGap = compare_invariant(pi, stat.grid, grid);
    {
        CsvWriter csv(join_path(outDir, "invariant_gap.csv"),
                      {"gap", "target", "piV", "bPrime", "passed"});
        csv.row({csv_double(measureGap), csv_double(ap.epsMeasure),
                 csv_double(pi.dot(grid.weights())), csv_double(bPrime),
                 measureGap <= ap.epsMeasure ? "1" : "0"});
    }

    // semigroup gaps for the configured test function
    const FunctionVector g = make_test_function(ap.testFunction, grid);
    const SemigroupGaps sg = compare_semigroups(lad.Dh, lad.Dk, lad.gen, g, ap.times, grid);
    const double semigroupTarget = ap.epsSemigroupFactor * sg.budget;
    {
        CsvWriter csv(join_path(outDir, "semigroup_gaps.csv"),
                      {"t", "full", "jumpStage", "hmmStage", "budget", "target", "passed"});
        for (std::size_t k = 0; k < sg.times.size(); ++k)
            csv.row({csv_double(sg.times[k]), csv_double(sg.full[k]),
                     csv_double(sg.jumpStage[k]), csv_double(sg.hmmStage[k]),
                     csv_double(sg.budget), csv_double(semigroupTarget),
                     sg.full[k] <= semigroupTarget ? "1" : "0"});
    }

    save_hmm(lad.gen, join_path(outDir, "hmm_generator.json"));

    const bool resolventPass =
        std::all_of(resolventGaps.begin(), resolventGaps.end(),
                    [&](double gap) { return gap <= ap.epsResolvent; });
    const bool measurePass = measureGap <= ap.epsMeasure;
    const bool semigroupPass = std::all_of(sg.full.begin(), sg.full.end(), [&](double gap) {
        return gap <= semigroupTarget;
    });
    const bool passed = resolventPass && measurePass && semigroupPass;

    json summary;
    summary["command"] = "approximate";
    summary["passed"] = passed;
    summary["criteria"] = {{"resolvent", resolventPass},
                           {"invariantMeasure", measurePass},
                           {"semigroup", semigroupPass}};
    summary["delta"] = cert.cert.delta;
    summary["b"] = cert.cert.b;
    summary["bPrime"] = bPrime;
    summary["kappa"] = ap.kappa;
    summary["cells"] = static_cast<int>(lad.gen.r.rows());
    summary["alphaGrid"] = alphas;
    summary["resolventGaps"] = resolventGaps;
    summary["measureGap"] = measureGap;
    summary["semigroupGaps"] = sg.full;
    summary["semigroupBudget"] = sg.budget;
    summary["targets"] = {{"epsResolvent", ap.epsResolvent},
                          {"epsMeasure", ap.epsMeasure},
                          {"semigroup", semigroupTarget}};
    summary["epsilonTail"] = lad.plan.epsilonTail;
    summary["finiteRankWeightedGap"] = lad.T.weightedGap;
    summary["finiteRankRawGap"] = lad.T.rawGap;
    summary["generatorGap"] = lad.gen.generatorGap;
    summary["mixWeight"] = lad.gen.mixWeight;
    summary["validityThresholds"] = tThreshold;
    write_summary(outDir, std::move(summary), cfg);
    return passed ? kExitPass : kExitUnmet;
}

int cmd_spectrum(const RunConfig& cfg, const PipelineOptions& opt) {
    const std::string outDir = opt.outDir.empty() ? cfg.output : opt.outDir;
    ensure_dir(outDir);
    const CertifyData cert = run_certify(cfg);

    const GeneratorMatrix Dh = discretize_generator(cert.model, cert.grid);
    const KernelMatrix R1 = resolvent_direct(Dh, 1.0);
    write_spectrum_csv(spectrum(Dh.entries, "generator"), outDir);
    write_spectrum_csv(spectrum(R1.entries, "resolvent_1"), outDir);

    json summary;
    summary["command"] = "spectrum";
    summary["passed"] = true;
    if (cfg.approximation) {
        const LadderData lad = build_ladder(cfg, cert);
        write_spectrum_csv(spectrum(lad.gen.gridGenerator, "finite_rank_generator"), outDir);
        write_spectrum_csv(spectrum(hmm_resolvent_inverse(lad.gen, 1.0).entries, "hmm_resolvent_1"),
                           outDir);
        write_spectrum_csv(spectrum_reduced(lad.gen), outDir);
        summary["cells"] = static_cast<int>(lad.gen.r.rows());
    }
    write_summary(outDir, std::move(summary), cfg);
    return kExitPass;
}

int cmd_simulate(const RunConfig& cfg, const PipelineOptions& opt) {
    const std::string outDir = opt.outDir.empty() ? cfg.output : opt.outDir;
    ensure_dir(outDir);
    const CertifyData cert = run_certify(cfg);
    const GridSpace& grid = cert.grid;
    const std::uint64_t seed =
        opt.seed >= 0 ? static_cast<std::uint64_t>(opt.seed) : cfg.simulation.seed;
    const std::int64_t nPaths = cfg.simulation.paths;
    const double dt = cfg.simulation.dt;
    const double horizon = cfg.simulation.horizon;

    // SDE endpoint moments at the horizon, block-reduced deterministically
    {
        constexpr std::int64_t kBlock = 1024;
        const std::int64_t nBlocks = (nPaths + kBlock - 1) / kBlock;
        const int d = cert.model.dim();
        Eigen::MatrixXd blockMean = Eigen::MatrixXd::Zero(nBlocks, d);
        Eigen::VectorXd blockSq = Eigen::VectorXd::Zero(nBlocks);
        Eigen::VectorXd blockSq2 = Eigen::VectorXd::Zero(nBlocks);
        const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
        parallel_blocks(nPaths, kBlock, opt.threads,
                        [&](std::int64_t blk, std::int64_t lo, std::int64_t hi) {
                            for (std::int64_t p = lo; p < hi; ++p) {
                                Rng rng(substream(seed, 1, static_cast<std::uint64_t>(p)), 0);
                                const Eigen::VectorXd xT = sde_endpoint(
                                    cert.model, x0, dt, horizon, rng, grid.bounds());
                                blockMean.row(blk) += xT.transpose();
                                blockSq[blk] += xT.squaredNorm();
                                blockSq2[blk] += xT.squaredNorm() * xT.squaredNorm();
                            }
                        });
        const Eigen::VectorXd mean = blockMean.colwise().sum() / static_cast<double>(nPaths);
        const double m2 = blockSq.sum() / static_cast<double>(nPaths);
        const double m4 = blockSq2.sum() / static_cast<double>(nPaths);
        const double seM2 = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(nPaths));
        CsvWriter csv(join_path(outDir, "sde_stats.csv"),
                      {"t", "paths", "dt", "meanX", "meanSq", "seMeanSq"});
        std::string meanStr = csv_double(mean[0]);
        for (int k = 1; k < d; ++k) meanStr += ";" + csv_double(mean[k]);
        csv.row({csv_double(horizon), std::to_string(nPaths), csv_double(dt), meanStr,
                 csv_double(m2), csv_double(seM2)});
    }

    const GeneratorMatrix Dh = discretize_generator(cert.model, cert.grid);

    // Monte Carlo resolvent rows vs direct rows at three starting points
    {
        const KernelMatrix R1 = resolvent_direct(Dh, 1.0);
        const double span = grid.bounds()[0].width();
        std::vector<Eigen::VectorXd> starts;
        for (double frac : {0.0, 0.25, -0.125}) {
            Eigen::VectorXd x0 = Eigen::VectorXd::Zero(cert.model.dim());
            x0[0] = frac * span;
            starts.push_back(x0);
        }
        for (std::size_t s = 0; s < starts.size(); ++s) {
            const McLaw law = resolvent_mc(cert.model, 1.0, starts[s], nPaths, dt,
                                           substream(seed, 2, s), grid, opt.threads);
            const Eigen::Index row = grid.nearest_node(starts[s]);
            CsvWriter csv(join_path(outDir, "resolvent_mc_" + std::to_string(s) + ".csv"),
                          {"node", "x", "mcProb", "se", "matrixProb", "z"});
            for (Eigen::Index j = 0; j < grid.size(); ++j) {
                const double matrixProb = R1.entries(row, j);  // alpha = 1: row is a law
                const double se =
                    std::sqrt(matrixProb * (1.0 - matrixProb) / static_cast<double>(nPaths));
                const double z = se > 0.0 ? (law.prob[j] - matrixProb) / se : 0.0;
                csv.row({std::to_string(j), node_coords(grid, j), csv_double(law.prob[j]),
                         csv_double(law.stderr_[j]), csv_double(matrixProb), csv_double(z)});
            }
        }
    }

    json summary;
    summary["command"] = "simulate";
    summary["passed"] = true;
    summary["seed"] = seed;
    summary["paths"] = nPaths;

    if (cfg.approximation) {
        const LadderData lad = build_ladder(cfg, cert);
        const double kappa = cfg.approximation->kappa;

        // jump process: counts and law at the horizon vs the matrix semigroup
        {
            const Eigen::Index x0 = grid.nearest_node(Eigen::VectorXd::Zero(cert.model.dim()));
            const std::int64_t runs = std::min<std::int64_t>(nPaths, 100000);
            constexpr std::int64_t kBlock = 1024;
            const std::int64_t nBlocks = (runs + kBlock - 1) / kBlock;
            std::vector<std::vector<std::int64_t>> counts(
                static_cast<std::size_t>(nBlocks),
                std::vector<std::int64_t>(grid.size(), 0));
            Eigen::VectorXd blockJumps = Eigen::VectorXd::Zero(nBlocks);
            Eigen::VectorXd blockJumpsSq = Eigen::VectorXd::Zero(nBlocks);
            parallel_blocks(runs, kBlock, opt.threads,
                            [&](std::int64_t blk, std::int64_t lo, std::int64_t hi) {
                                for (std::int64_t p = lo; p < hi; ++p) {
                                    const JumpPath path = simulate_jump(
                                        lad.Dk, x0, horizon,
                                        substream(seed, 3, static_cast<std::uint64_t>(p)));
                                    counts[blk][static_cast<std::size_t>(path.nodes.back())]++;
                                    const double jumps =
                                        static_cast<double>(path.nodes.size() - 1);
                                    blockJumps[blk] += jumps;
                                    blockJumpsSq[blk] += jumps * jumps;
                                }
                            });
            const KernelMatrix Pt = jump_semigroup(lad.Dk, horizon);
            CsvWriter csv(join_path(outDir, "jump_law.csv"),
                          {"node", "x", "empirical", "matrix", "z"});
            for (Eigen::Index j = 0; j < grid.size(); ++j) {
                double emp = 0.0;
                for (const auto& blk : counts) emp += static_cast<double>(blk[j]);
                emp /= static_cast<double>(runs);
                const double p = Pt.entries(x0, j);
                const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
                csv.row({std::to_string(j), node_coords(grid, j), csv_double(emp),
                         csv_double(p), csv_double(se > 0.0 ? (emp - p) / se : 0.0)});
            }
            const double meanJumps = blockJumps.sum() / static_cast<double>(runs);
            const double meanJumpsSq = blockJumpsSq.sum() / static_cast<double>(runs);
            const double seJumps = std::sqrt(
                std::max(0.0, meanJumpsSq - meanJumps * meanJumps) / static_cast<double>(runs));
            CsvWriter cj(join_path(outDir, "jump_counts.csv"),
                         {"runs", "meanJumps", "expected", "se"});
            cj.row({std::to_string(runs), csv_double(meanJumps), csv_double(kappa * horizon),
                    csv_double(seJumps)});
        }

        // HMM: hidden marginal at t = 1 vs the coefficient ODE
        {
            const std::int64_t runs = std::min<std::int64_t>(nPaths, 100000);
            const int N = static_cast<int>(lad.gen.r.rows());
            constexpr std::int64_t kBlock = 1024;
            const std::int64_t nBlocks = (runs + kBlock - 1) / kBlock;
            std::vector<std::vector<std::int64_t>> hidden(
                static_cast<std::size_t>(nBlocks), std::vector<std::int64_t>(N + 1, 0));
            parallel_blocks(runs, kBlock, opt.threads,
                            [&](std::int64_t blk, std::int64_t lo, std::int64_t hi) {
                                for (std::int64_t p = lo; p < hi; ++p) {
                                    const HmmPath path = simulate_hmm(
                                        lad.gen, 1, 1.0,
                                        substream(seed, 4, static_cast<std::uint64_t>(p)));
                                    hidden[blk][static_cast<std::size_t>(path.hidden.back())]++;
                                }
                            });
            Eigen::VectorXd p0 = Eigen::VectorXd::Zero(N);
            p0[0] = 1.0;
            const Eigen::VectorXd pt = hmm_semigroup_coeffs(lad.gen, p0, 1.0);
            CsvWriter csv(join_path(outDir, "hmm_hidden.csv"),
                          {"state", "empirical", "ode", "z"});
            for (int k = 1; k <= N; ++k) {
                double emp = 0.0;
                for (const auto& blk : hidden) emp += static_cast<double>(blk[k]);
                emp /= static_cast<double>(runs);
                const double p = pt[k - 1];
                const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
                csv.row({std::to_string(k), csv_double(emp), csv_double(p),
                         csv_double(se > 0.0 ? (emp - p) / se : 0.0)});
            }
        }

        // invariant measure: null-space solve vs occupation histogram
        {
            const Eigen::VectorXd pi = invariant_measure(Dh, grid);
            const Eigen::VectorXd hist = invariant_measure_mc(
                cert.model, grid, std::min(2000.0, static_cast<double>(nPaths) * dt), 10.0,
                dt, substream(seed, 5, 0));
            CsvWriter csv(join_path(outDir, "invariant_mc.csv"),
                          {"node", "x", "pi", "histogram"});
            for (Eigen::Index j = 0; j < grid.size(); ++j)
                csv.row({std::to_string(j), node_coords(grid, j), csv_double(pi[j]),
                         csv_double(hist[j])});
        }
        summary["kappa"] = kappa;
    }

    write_summary(outDir, std::move(summary), cfg);
    return kExitPass;
}

}  // namespace diffhmm
