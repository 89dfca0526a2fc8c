#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "experiment/config.hpp"

namespace circqft::experiment {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool svg = false;
};

struct CommandReport {
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> outputs;  ///< file names relative to out_dir
};

CommandReport cmd_eigentraj(const ExperimentConfig& config, const RunOptions& options);
CommandReport cmd_evolve(const ExperimentConfig& config, const RunOptions& options);
CommandReport cmd_adiabaticity(const ExperimentConfig& config, const RunOptions& options);
CommandReport cmd_qpe(const ExperimentConfig& config, const RunOptions& options);
CommandReport cmd_models(const ExperimentConfig& config, const RunOptions& options);
CommandReport cmd_sweep(const ExperimentConfig& config, const RunOptions& options);

const std::vector<std::string_view>& command_names();

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitPhysics = 4,
};

/// Maps the in-flight exception to an exit code and writes a one-line
/// diagnosis to `err`. Must be called from inside a catch block.
int report_current_exception(std::ostream& err);

/// Runs `command`, writes its metadata sidecar and prints the summary to
/// `out`. Returns the process exit code; errors never escape.
int run_command(std::string_view command, const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace circqft::experiment
