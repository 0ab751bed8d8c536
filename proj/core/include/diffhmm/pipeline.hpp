#pragma once

#include <cstdint>
#include <string>

#include "diffhmm/config.hpp"

namespace diffhmm {

struct PipelineOptions {
    std::string outDir;      // empty: use the config's output directory
    std::int64_t seed = -1;  // negative: use the config's seed
    int threads = 0;         // 0 = auto
};

/// Exit codes shared by all commands:
///   0 pass, 1 criteria unmet, 2 config error, 3 numeric failure.
constexpr int kExitPass = 0;
constexpr int kExitUnmet = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

/// Drift-condition certification: per-node slack CSV plus a summary; exit 0
/// iff the certificate passes.
int cmd_certify(const RunConfig& cfg, const PipelineOptions& opt);

/// Full approximation ladder: resolvent family, jump process, finite-rank
/// generator, HMM resolvents and stationary law; gap tables and summary.
/// Exit 0 iff every configured target is met.
int cmd_approximate(const RunConfig& cfg, const PipelineOptions& opt);

/// Eigenvalue tables for the discretized generator, its resolvent, the
/// finite-rank generator and its resolvent.
int cmd_spectrum(const RunConfig& cfg, const PipelineOptions& opt);

/// Simulation statistics and law-vs-matrix comparison tables for the SDE, the
/// jump process, and the HMM.
int cmd_simulate(const RunConfig& cfg, const PipelineOptions& opt);

}  // namespace diffhmm
