#pragma once

#include <cstdint>
#include <vector>

#include "diffhmm/grid.hpp"
#include "diffhmm/model.hpp"
#include "diffhmm/rng.hpp"

namespace diffhmm {

struct SdePath {
    std::vector<double> times;
    Eigen::MatrixXd states;  // one row per time point
};

/// Euler-Maruyama path on [0, T] with steps of size dt (final partial step
/// included so the path ends exactly at T). The state is reflected at the
/// faces of `box`; the box is placed where v is large, so the reflection bias
/// is negligible in v-weighted comparisons. Throws NumericError with the step
/// index if the state becomes non-finite.
SdePath simulate_sde(const DiffusionModel& model, const Eigen::VectorXd& x0, double dt,
                     double T, std::uint64_t seed, const std::vector<Interval>& box);

/// Endpoint of one Euler-Maruyama path driven by the given stream.
Eigen::VectorXd sde_endpoint(const DiffusionModel& model, const Eigen::VectorXd& x0,
                             double dt, double T, Rng& rng,
                             const std::vector<Interval>& box);

}  // namespace diffhmm
