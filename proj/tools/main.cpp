#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "circqft/version.hpp"
#include "experiment/commands.hpp"
#include "experiment/config.hpp"

namespace cx = circqft::experiment;

int main(int argc, char** argv) {
    CLI::App app{"circqft: adiabatic circulant-Hamiltonian QFT simulator"};
    app.set_version_flag("--version", std::string(circqft::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;
    std::optional<std::size_t> steps;
    std::optional<std::uint64_t> seed;

    const char* descriptions[] = {"eigenvalue trajectories", "propagator and phased-DFT factorization",
                                  "gap and nonadiabatic coupling diagnostics", "phase estimation run",
                                  "model matrices and level-shift solutions", "E T parameter sweep"};
    std::size_t i = 0;
    for (auto name : cx::command_names()) {
        auto* sub = app.add_subcommand(std::string(name), descriptions[i++]);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_flag("--svg", svg, "also write SVG line plots");
        sub->add_option("--steps", steps, "override the integration step count")->check(CLI::PositiveNumber);
        if (name == "qpe") sub->add_option("--seed", seed, "RNG seed for sampled measurement (qpe.shots > 0)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cx::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    cx::ExperimentConfig config;
    try {
        config = cx::load_config(config_path);
        if (steps) {
            config.steps = *steps;
            config.source["steps"] = *steps;
        }
        if (seed) {
            if (config.qpe.shots == 0) throw cx::ConfigError("--seed requires qpe.shots > 0 (sampled mode)");
            config.qpe.seed = *seed;
            config.source["qpe"]["seed"] = *seed;
        }
    } catch (...) {
        return cx::report_current_exception(std::cerr);
    }
    return cx::run_command(command, config, cx::RunOptions{out_dir, svg}, std::cout, std::cerr);
}
