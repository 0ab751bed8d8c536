#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffhmm/grid.hpp"
#include "diffhmm/model.hpp"

namespace diffhmm {

/// Model block: a named preset, or explicit polynomial coefficient tables
/// (one monomial list per drift component and per noise-matrix entry).
struct ModelConfig {
    std::string preset;  // empty when explicit tables are given
    int dim = 1;
    int noiseDim = 1;
    std::vector<Polynomial> drift;
    std::vector<Polynomial> diffusion;

    DiffusionModel build() const;
    friend bool operator==(const ModelConfig&, const ModelConfig&);
};

struct GridConfig {
    std::vector<Interval> bounds;
    std::vector<int> resolution;
    friend bool operator==(const GridConfig&, const GridConfig&);
};

struct LyapunovConfig {
    Polynomial V;
    Polynomial W;
    double delta = 1.0;
    double b = 1.0;
    double cRadius = 1.0;  // C = { |x|_2 <= cRadius }
    friend bool operator==(const LyapunovConfig&, const LyapunovConfig&);
};

/// Test function g(x) = poly(x) * exp(-gaussFactor |x|^2) for the semigroup
/// comparison.
struct TestFunctionConfig {
    Polynomial poly;
    double gaussFactor = 0.0;
    friend bool operator==(const TestFunctionConfig&, const TestFunctionConfig&);
};

struct ApproximationConfig {
    double kappa = 10.0;
    int cellsPerAxis = 16;
    double r0 = 0.0;            // truncation level; <= 0 means the whole box
    double rangeDelta = 0.5;    // alpha grid {delta, 1, 1/delta}
    double epsResolvent = 0.1;
    double epsMeasure = 0.1;
    double epsSemigroupFactor = 0.1;
    std::vector<double> times = {0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> kappaSweep;  // for the measured-vs-bound table
    TestFunctionConfig testFunction;
    bool constantW0 = false;
    friend bool operator==(const ApproximationConfig&, const ApproximationConfig&);
};

struct SimulationConfig {
    std::int64_t paths = 100000;
    double dt = 1e-3;
    double horizon = 1.0;
    std::uint64_t seed = 12345;
    friend bool operator==(const SimulationConfig&, const SimulationConfig&);
};

struct RunConfig {
    ModelConfig model;
    GridConfig grid;
    std::optional<LyapunovConfig> lyapunov;
    std::optional<ApproximationConfig> approximation;
    SimulationConfig simulation;
    std::string output = "out";
    std::vector<std::string> warnings;  // not part of equality / round trip

    GridSpace build_grid() const;
    std::vector<double> alpha_grid() const;
    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parse a config file; throws ConfigError with a key-path diagnostic.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Serialize back to the same schema; parse_config_text(config_to_text(c)) == c.
std::string config_to_text(const RunConfig& cfg);

/// Evaluate a monomial table on the grid.
FunctionVector eval_poly_on_grid(const Polynomial& p, const GridSpace& grid,
                                 const std::string& label);

/// Node set { |x|_2 <= radius }.
std::vector<int> ball_node_set(const GridSpace& grid, double radius);

/// sup of exp(V - min_grid V) over the continuum ball of the given radius
/// (boundary samples plus node values), for the b' computation when the true
/// supremum falls between nodes.
double sup_v_on_ball(const Polynomial& V, const GridSpace& grid, double radius);

}  // namespace diffhmm
