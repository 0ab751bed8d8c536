#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diffhmm/config.hpp"
#include "diffhmm/errors.hpp"
#include "diffhmm/pipeline.hpp"

using namespace diffhmm;

namespace {

const std::string kConfigDir = DIFFHMM_CONFIG_DIR;
const std::string kOutRoot = DIFFHMM_TEST_OUT;

std::string out_dir(const std::string& name) {
    const std::string dir = kOutRoot + "/" + name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunConfig small_ou_config() {
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    cfg.grid.resolution = {61};
    cfg.approximation->cellsPerAxis = 16;
    cfg.approximation->kappaSweep = {5.0, 10.0};
    cfg.simulation.paths = 4000;
    cfg.simulation.dt = 2e-3;
    return cfg;
}

}  // namespace

TEST_CASE("shipped configs parse and carry the expected parameters") {
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    CHECK(cfg.model.preset == "ou1d");
    REQUIRE(cfg.lyapunov.has_value());
    CHECK(cfg.lyapunov->delta == 1.0);
    CHECK(cfg.lyapunov->b == 1.5);
    REQUIRE(cfg.approximation.has_value());
    CHECK(cfg.approximation->kappa == 20.0);
    CHECK(cfg.approximation->cellsPerAxis == 64);
    CHECK(cfg.alpha_grid() == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(parse_config_file(kConfigDir + "/doublewell1d.json").model.preset ==
          "doublewell1d");
    CHECK(parse_config_file(kConfigDir + "/ou2d.json").model.dim == 2);
}

TEST_CASE("config errors carry key diagnostics") {
    CHECK_THROWS_WITH_AS(parse_config_text("{\"model\": {\"preset\": \"ou1d\"}}"),
                         doctest::Contains("grid"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("not json at all"), doctest::Contains("config"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config_text(
                        "{\"model\": {\"preset\": \"nope\"}, "
                        "\"grid\": {\"bounds\": [[-1,1]], \"resolution\": [5]}}"),
                    ConfigError);
    // epsilon targets must be positive
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    std::string text = config_to_text(cfg);
    auto broken = text;
    broken.replace(broken.find("\"epsResolvent\": 0.1"), 20, "\"epsResolvent\": 0.0");
    CHECK_THROWS_AS(parse_config_text(broken), ConfigError);
}

TEST_CASE("alpha grid construction from the range parameter") {
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    cfg.approximation->rangeDelta = 0.9;
    const auto alphas = cfg.alpha_grid();
    REQUIRE(alphas.size() == 3);
    CHECK(alphas[0] == doctest::Approx(0.9));
    CHECK(alphas[1] == doctest::Approx(1.0));
    CHECK(alphas[2] == doctest::Approx(1.0 / 0.9));
}

TEST_CASE("kappa below the range reciprocal only warns") {
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    std::string text = config_to_text(cfg);
    text.replace(text.find("\"kappa\": 20.0"), 13, "\"kappa\": 1.5");
    RunConfig parsed = parse_config_text(text);
    CHECK(!parsed.warnings.empty());
}

TEST_CASE("config round trip re-parses to an equal value") {
    for (const char* name : {"/ou1d.json", "/doublewell1d.json", "/ou2d.json"}) {
        RunConfig cfg = parse_config_file(kConfigDir + name);
        RunConfig again = parse_config_text(config_to_text(cfg));
        CHECK(again == cfg);
    }
}

TEST_CASE("cmd_certify exits 0 on the OU certificate and 1 when b is zeroed") {
    RunConfig cfg = small_ou_config();
    PipelineOptions opt{out_dir("certify_pass"), -1, 0};
    CHECK(cmd_certify(cfg, opt) == kExitPass);
    CHECK(std::filesystem::exists(opt.outDir + "/certificate.csv"));
    CHECK(std::filesystem::exists(opt.outDir + "/summary.json"));

    RunConfig broken = cfg;
    broken.lyapunov->b = 0.0;
    // the default tolerance scales with 10 h^2, so test the failure on a grid
    // fine enough that the b = 0 slack of 3/2 cannot hide inside it
    broken.grid.resolution = {241};
    PipelineOptions opt2{out_dir("certify_fail"), -1, 0};
    CHECK(cmd_certify(broken, opt2) == kExitUnmet);
}

TEST_CASE("summary echoes a config that re-parses equal") {
    RunConfig cfg = small_ou_config();
    PipelineOptions opt{out_dir("certify_echo"), -1, 0};
    REQUIRE(cmd_certify(cfg, opt) == kExitPass);
    const std::string summary = slurp(opt.outDir + "/summary.json");
    const auto pos = summary.find("\"config\"");
    REQUIRE(pos != std::string::npos);
    // extract the config object: parse the whole summary as JSON via the
    // config parser contract (it ignores unknown keys at the top level only),
    // so instead re-parse via a trivial brace matcher
    int depth = 0;
    std::size_t start = summary.find('{', pos);
    std::size_t end = start;
    for (std::size_t k = start; k < summary.size(); ++k) {
        if (summary[k] == '{') ++depth;
        if (summary[k] == '}' && --depth == 0) {
            end = k + 1;
            break;
        }
    }
    RunConfig echoed = parse_config_text(summary.substr(start, end - start));
    CHECK(echoed == cfg);
}

TEST_CASE("cmd_approximate meets the shipped targets and fails tightened ones") {
    RunConfig cfg = parse_config_file(kConfigDir + "/ou1d.json");
    PipelineOptions opt{out_dir("approx_pass"), -1, 0};
    CHECK(cmd_approximate(cfg, opt) == kExitPass);
    for (const char* f : {"resolvent_gaps.csv", "semigroup_gaps.csv", "invariant_gap.csv",
                          "jump_bounds.csv", "hmm_resolvent_norms.csv",
                          "hmm_generator.json", "summary.json"})
        CHECK(std::filesystem::exists(opt.outDir + "/" + f));

    RunConfig tight = small_ou_config();
    tight.approximation->cellsPerAxis = 4;
    tight.approximation->epsResolvent = 1e-6;
    PipelineOptions opt2{out_dir("approx_fail"), -1, 0};
    CHECK(cmd_approximate(tight, opt2) == kExitUnmet);
    const std::string summary = slurp(opt2.outDir + "/summary.json");
    CHECK(summary.find("\"resolvent\": false") != std::string::npos);
}

TEST_CASE("cmd_approximate refuses to run past a failing certificate") {
    RunConfig cfg = small_ou_config();
    cfg.lyapunov->b = 0.0;
    cfg.grid.resolution = {241};
    PipelineOptions opt{out_dir("approx_cert_fail"), -1, 0};
    CHECK(cmd_approximate(cfg, opt) == kExitUnmet);
    CHECK(slurp(opt.outDir + "/summary.json").find("certificate failed") !=
          std::string::npos);
}

TEST_CASE("cmd_spectrum writes eigenvalue tables") {
    RunConfig cfg = small_ou_config();
    PipelineOptions opt{out_dir("spectrum"), -1, 0};
    CHECK(cmd_spectrum(cfg, opt) == kExitPass);
    for (const char* f :
         {"spectrum_generator.csv", "spectrum_resolvent_1.csv",
          "spectrum_finite_rank_generator.csv", "spectrum_hmm_resolvent_1.csv",
          "spectrum_hmm_reduced.csv"})
        CHECK(std::filesystem::exists(opt.outDir + "/" + f));
}

TEST_CASE("pipeline outputs are byte-identical across thread counts and reruns") {
    RunConfig cfg = small_ou_config();
    PipelineOptions one{out_dir("det_t1"), 4242, 1};
    PipelineOptions four{out_dir("det_t4"), 4242, 4};
    REQUIRE(cmd_simulate(cfg, one) == kExitPass);
    REQUIRE(cmd_simulate(cfg, four) == kExitPass);

    std::size_t compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(one.outDir)) {
        const std::string name = entry.path().filename().string();
        std::string a = slurp(one.outDir + "/" + name);
        std::string b = slurp(four.outDir + "/" + name);
        CHECK(a == b);
        ++compared;
    }
    CHECK(compared >= 5);
}

TEST_CASE("the CLI binary maps outcomes to the documented exit codes") {
    const std::string bin = DIFFHMM_CLI_BIN;
    const std::string dir = out_dir("cli_binary");

    auto run = [&](const std::string& args) {
        const int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run("certify --config " + kConfigDir + "/ou1d.json --out " + dir + "/a") == 0);
    CHECK(run("certify --config " + dir + "/missing.json") == 2);

    std::ofstream bad(dir + "/bad.json");
    bad << "{\"model\": {\"preset\": \"ou1d\"}}";  // no grid block
    bad.close();
    CHECK(run("certify --config " + dir + "/bad.json") == 2);
    CHECK(run("approximate --config " + kConfigDir + "/ou1d.json --out " + dir +
              "/b --threads 2") == 0);
    CHECK(run("nonsense") == 2);
}
