#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "diffhmm/errors.hpp"
#include "diffhmm/pipeline.hpp"

namespace {

int dispatch(const std::string& command, const std::string& configPath,
             const diffhmm::PipelineOptions& opt) {
    const diffhmm::RunConfig cfg = diffhmm::parse_config_file(configPath);
    for (const auto& warning : cfg.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    if (command == "certify") return diffhmm::cmd_certify(cfg, opt);
    if (command == "approximate") return diffhmm::cmd_approximate(cfg, opt);
    if (command == "spectrum") return diffhmm::cmd_spectrum(cfg, opt);
    return diffhmm::cmd_simulate(cfg, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-state approximation of diffusion semigroups with certified "
                 "weighted-norm error bounds"};
    app.require_subcommand(1);

    std::string configPath;
    diffhmm::PipelineOptions opt;

    for (const char* name : {"certify", "approximate", "spectrum", "simulate"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", configPath, "run configuration (JSON)")->required();
        sub->add_option("--out", opt.outDir, "output directory (default: config)");
        sub->add_option("--seed", opt.seed, "seed override (default: config)");
        sub->add_option("--threads", opt.threads, "worker threads, 0 = auto");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : diffhmm::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, configPath, opt);
    } catch (const diffhmm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return diffhmm::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return diffhmm::kExitNumeric;
    }
}
