#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "circqft/circulant.hpp"
#include "circqft/linalg.hpp"
#include "circqft/qpe.hpp"
#include "circqft/schedule.hpp"

namespace circqft::experiment {

/// Malformed or inconsistent experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { FourLevel, SixLevel, Custom };

struct ModelConfig {
    ModelKind kind = ModelKind::FourLevel;
    double energy = 10.0;                 ///< four_level: E
    cplx coupling{10.0, 10.0 / 3.0};      ///< four_level: V
    cplx omega1;                          ///< six_level
    cplx omega2;                          ///< six_level
    std::vector<double> h0_diagonal;      ///< six_level (optional) / custom
    std::vector<cplx> h1_first_column;    ///< custom
};

struct PulseConfig {
    PulseKind kind = PulseKind::SechMasked;
    double crossing_time = 1.0;
    double mask_width = 1.0;

    PulsePair make() const;
};

struct QpeSettings {
    double phi = 0.75;
    unsigned register_qubits = 2;
    QpeBackend backend = QpeBackend::Simulator;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    ModelConfig model;
    PulseConfig pulses;
    std::optional<TimeWindow> window;
    std::size_t steps = kDefaultSteps;
    std::optional<std::size_t> grid_points;
    Direction direction = Direction::Forward;
    QpeSettings qpe;
    std::vector<double> sweep_et = {5.0, 10.0, 20.0, 40.0};

    nlohmann::json source;  ///< parsed document, echoed into metadata sidecars

    TimeWindow effective_window() const;
    std::size_t effective_grid_points() const { return grid_points.value_or(steps + 1); }
};

/// Validates `doc` against the schema documented in the README.
/// Unknown keys, wrong types and out-of-range values raise ConfigError with
/// the dotted key path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The (H0, H1) pair a schedule runs on. For six_level, H1 is the circulant
/// obtained by the diagonal phase change; `gauge` records it.
struct ModelMatrices {
    ComplexMatrix h0;
    ComplexMatrix h1;
    std::vector<std::string> warnings;
    std::optional<GaugeReduction> gauge;
};

/// Builds the matrices for a schedule. Requires an H0 (implicit for four_level).
ModelMatrices schedule_matrices(const ModelConfig& model);

Schedule make_schedule(const ExperimentConfig& config, Direction direction);

QpeConfig make_qpe_config(const ExperimentConfig& config);

/// Copy of `config` with E and V rescaled so that E T equals `et`
/// (V keeps its ratio to E). Only four_level models can be swept.
ExperimentConfig with_energy_time(const ExperimentConfig& config, double et);

}  // namespace circqft::experiment
