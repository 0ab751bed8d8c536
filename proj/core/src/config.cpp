#include "diffhmm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diffhmm/errors.hpp"

namespace diffhmm {

using nlohmann::json;

bool operator==(const Monomial& a, const Monomial& b) {
    return a.coeff == b.coeff && a.powers == b.powers;
}
bool operator==(const ModelConfig& a, const ModelConfig& b) {
    return a.preset == b.preset && a.dim == b.dim && a.noiseDim == b.noiseDim &&
           a.drift == b.drift && a.diffusion == b.diffusion;
}
bool operator==(const GridConfig& a, const GridConfig& b) {
    if (a.resolution != b.resolution || a.bounds.size() != b.bounds.size()) return false;
    for (std::size_t k = 0; k < a.bounds.size(); ++k)
        if (a.bounds[k].lo != b.bounds[k].lo || a.bounds[k].hi != b.bounds[k].hi)
            return false;
    return true;
}
bool operator==(const LyapunovConfig& a, const LyapunovConfig& b) {
    return a.V == b.V && a.W == b.W && a.delta == b.delta && a.b == b.b &&
           a.cRadius == b.cRadius;
}
bool operator==(const TestFunctionConfig& a, const TestFunctionConfig& b) {
    return a.poly == b.poly && a.gaussFactor == b.gaussFactor;
}
bool operator==(const ApproximationConfig& a, const ApproximationConfig& b) {
    return a.kappa == b.kappa && a.cellsPerAxis == b.cellsPerAxis && a.r0 == b.r0 &&
           a.rangeDelta == b.rangeDelta && a.epsResolvent == b.epsResolvent &&
           a.epsMeasure == b.epsMeasure && a.epsSemigroupFactor == b.epsSemigroupFactor &&
           a.times == b.times && a.kappaSweep == b.kappaSweep &&
           a.testFunction == b.testFunction && a.constantW0 == b.constantW0;
}
bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return a.paths == b.paths && a.dt == b.dt && a.horizon == b.horizon && a.seed == b.seed;
}
bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.model == b.model && a.grid == b.grid && a.lyapunov == b.lyapunov &&
           a.approximation == b.approximation && a.simulation == b.simulation &&
           a.output == b.output;
}

DiffusionModel ModelConfig::build() const {
    if (!preset.empty()) return DiffusionModel::preset(preset);
    return DiffusionModel(dim, noiseDim, drift, diffusion);
}

GridSpace RunConfig::build_grid() const {
    const DiffusionModel m = model.build();
    (void)m;
    Polynomial V = lyapunov ? lyapunov->V : Polynomial{};
    return GridSpace::build(grid.bounds, grid.resolution, [&V](const Eigen::VectorXd& x) {
        return V.empty() ? 0.0 : poly_eval(V, x);
    });
}

std::vector<double> RunConfig::alpha_grid() const {
    if (!approximation) throw ConfigError("config: missing 'approximation' block");
    const double d = approximation->rangeDelta;
    if (std::abs(d - 1.0) < 1e-12) return {1.0};
    return {d, 1.0, 1.0 / d};
}

namespace {

const json& need(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("config: missing key '" + path + key + "'");
    return *it;
}

double need_num(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number()) throw ConfigError("config: '" + path + key + "' must be a number");
    return v.get<double>();
}

Polynomial parse_poly(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ConfigError("config: '" + path + "' must be a monomial list");
    Polynomial p;
    for (const auto& term : arr) {
        Monomial m;
        m.coeff = need_num(term, "coeff", path + ".");
        const json& pw = need(term, "powers", path + ".");
        if (!pw.is_array()) throw ConfigError("config: '" + path + ".powers' must be an array");
        for (const auto& e : pw) m.powers.push_back(e.get<int>());
        p.push_back(std::move(m));
    }
    return p;
}

json poly_to_json(const Polynomial& p) {
    json arr = json::array();
    for (const auto& m : p) arr.push_back({{"coeff", m.coeff}, {"powers", m.powers}});
    return arr;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig cfg;

    const json& model = need(doc, "model", "");
    if (model.contains("preset")) {
        cfg.model.preset = model.at("preset").get<std::string>();
        const DiffusionModel m = DiffusionModel::preset(cfg.model.preset);  // validates
        cfg.model.dim = m.dim();
        cfg.model.noiseDim = m.noiseDim();
    } else {
        cfg.model.dim = static_cast<int>(need_num(model, "dim", "model."));
        cfg.model.noiseDim = static_cast<int>(need_num(model, "noiseDim", "model."));
        for (const auto& comp : need(model, "drift", "model."))
            cfg.model.drift.push_back(parse_poly(comp, "model.drift[]"));
        for (const auto& comp : need(model, "diffusion", "model."))
            cfg.model.diffusion.push_back(parse_poly(comp, "model.diffusion[]"));
    }

    const json& grid = need(doc, "grid", "");
    for (const auto& b : need(grid, "bounds", "grid.")) {
        if (!b.is_array() || b.size() != 2)
            throw ConfigError("config: 'grid.bounds' entries must be [lo, hi]");
        cfg.grid.bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    for (const auto& r : need(grid, "resolution", "grid."))
        cfg.grid.resolution.push_back(r.get<int>());
    if (cfg.grid.bounds.size() != cfg.grid.resolution.size())
        throw ConfigError("config: 'grid.bounds' and 'grid.resolution' differ in length");

    if (doc.contains("lyapunov")) {
        const json& ly = doc.at("lyapunov");
        LyapunovConfig l;
        l.V = parse_poly(need(ly, "V", "lyapunov."), "lyapunov.V");
        l.W = parse_poly(need(ly, "W", "lyapunov."), "lyapunov.W");
        l.delta = need_num(ly, "delta", "lyapunov.");
        l.b = need_num(ly, "b", "lyapunov.");
        l.cRadius = need_num(ly, "cRadius", "lyapunov.");
        if (!(l.delta > 0.0)) throw ConfigError("config: 'lyapunov.delta' must be positive");
        cfg.lyapunov = std::move(l);
    }

    if (doc.contains("approximation")) {
        const json& ap = doc.at("approximation");
        ApproximationConfig a;
        a.kappa = need_num(ap, "kappa", "approximation.");
        a.cellsPerAxis = static_cast<int>(need_num(ap, "cellsPerAxis", "approximation."));
        a.r0 = ap.value("r0", 0.0);
        a.rangeDelta = need_num(ap, "rangeDelta", "approximation.");
        a.epsResolvent = need_num(ap, "epsResolvent", "approximation.");
        a.epsMeasure = need_num(ap, "epsMeasure", "approximation.");
        a.epsSemigroupFactor = need_num(ap, "epsSemigroupFactor", "approximation.");
        if (ap.contains("times")) {
            a.times.clear();
            for (const auto& t : ap.at("times")) a.times.push_back(t.get<double>());
        }
        if (ap.contains("kappaSweep"))
            for (const auto& k : ap.at("kappaSweep")) a.kappaSweep.push_back(k.get<double>());
        if (ap.contains("testFunction")) {
            const json& tf = ap.at("testFunction");
            a.testFunction.poly =
                parse_poly(need(tf, "poly", "approximation.testFunction."),
                           "approximation.testFunction.poly");
            a.testFunction.gaussFactor = tf.value("gaussFactor", 0.0);
        }
        a.constantW0 = ap.value("constantW0", false);

        if (!(a.epsResolvent > 0.0 && a.epsMeasure > 0.0 && a.epsSemigroupFactor > 0.0))
            throw ConfigError("config: approximation epsilon targets must be positive");
        if (!(a.rangeDelta > 0.0 && a.rangeDelta <= 1.0))
            throw ConfigError("config: 'approximation.rangeDelta' must lie in (0, 1]");
        if (a.kappa < 1.0 / a.rangeDelta)
            cfg.warnings.push_back(
                "approximation.kappa < 1/rangeDelta: the uniform resolvent bound assumes "
                "kappa >= 1/rangeDelta");
        cfg.approximation = std::move(a);
    }

    if (doc.contains("simulation")) {
        const json& sim = doc.at("simulation");
        cfg.simulation.paths = sim.value("paths", std::int64_t{100000});
        cfg.simulation.dt = sim.value("dt", 1e-3);
        cfg.simulation.horizon = sim.value("horizon", 1.0);
        cfg.simulation.seed = sim.value("seed", std::uint64_t{12345});
    }

    cfg.output = doc.value("output", "out");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const RunConfig& cfg) {
    json doc;
    if (!cfg.model.preset.empty()) {
        doc["model"] = {{"preset", cfg.model.preset}};
    } else {
        json drift = json::array(), diff = json::array();
        for (const auto& p : cfg.model.drift) drift.push_back(poly_to_json(p));
        for (const auto& p : cfg.model.diffusion) diff.push_back(poly_to_json(p));
        doc["model"] = {{"dim", cfg.model.dim},
                        {"noiseDim", cfg.model.noiseDim},
                        {"drift", drift},
                        {"diffusion", diff}};
    }
    json bounds = json::array();
    for (const auto& b : cfg.grid.bounds) bounds.push_back({b.lo, b.hi});
    doc["grid"] = {{"bounds", bounds}, {"resolution", cfg.grid.resolution}};

    if (cfg.lyapunov) {
        doc["lyapunov"] = {{"V", poly_to_json(cfg.lyapunov->V)},
                           {"W", poly_to_json(cfg.lyapunov->W)},
                           {"delta", cfg.lyapunov->delta},
                           {"b", cfg.lyapunov->b},
                           {"cRadius", cfg.lyapunov->cRadius}};
    }
    if (cfg.approximation) {
        const auto& a = *cfg.approximation;
        json ap = {{"kappa", a.kappa},
                   {"cellsPerAxis", a.cellsPerAxis},
                   {"r0", a.r0},
                   {"rangeDelta", a.rangeDelta},
                   {"epsResolvent", a.epsResolvent},
                   {"epsMeasure", a.epsMeasure},
                   {"epsSemigroupFactor", a.epsSemigroupFactor},
                   {"times", a.times},
                   {"constantW0", a.constantW0}};
        if (!a.kappaSweep.empty()) ap["kappaSweep"] = a.kappaSweep;
        ap["testFunction"] = {{"poly", poly_to_json(a.testFunction.poly)},
                              {"gaussFactor", a.testFunction.gaussFactor}};
        doc["approximation"] = std::move(ap);
    }
    doc["simulation"] = {{"paths", cfg.simulation.paths},
                         {"dt", cfg.simulation.dt},
                         {"horizon", cfg.simulation.horizon},
                         {"seed", cfg.simulation.seed}};
    doc["output"] = cfg.output;
    return doc.dump(1);
}

FunctionVector eval_poly_on_grid(const Polynomial& p, const GridSpace& grid,
                                 const std::string& label) {
    return grid.sample([&p](const Eigen::VectorXd& x) { return poly_eval(p, x); }, label);
}

std::vector<int> ball_node_set(const GridSpace& grid, double radius) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (grid.node(i).norm() <= radius + 1e-12) idx.push_back(static_cast<int>(i));
    return idx;
}

double sup_v_on_ball(const Polynomial& V, const GridSpace& grid, double radius) {
    double vmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        vmin = std::min(vmin, poly_eval(V, grid.node(i)));

    double supV = -std::numeric_limits<double>::infinity();
    for (int i : ball_node_set(grid, radius))
        supV = std::max(supV, poly_eval(V, grid.node(i)));
    if (grid.dim() == 1) {
        for (double s : {-radius, radius}) {
            Eigen::VectorXd x(1);
            x[0] = s;
            supV = std::max(supV, poly_eval(V, x));
        }
    } else {
        constexpr int kAngles = 4096;
        for (int a = 0; a < kAngles; ++a) {
            const double phi = 2.0 * M_PI * a / kAngles;
            Eigen::VectorXd x(2);
            x << radius * std::cos(phi), radius * std::sin(phi);
            supV = std::max(supV, poly_eval(V, x));
        }
    }
    return std::exp(supV - vmin);
}

}  // namespace diffhmm
