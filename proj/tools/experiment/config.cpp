#include "experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "circqft/errors.hpp"
#include "circqft/models.hpp"

namespace circqft::experiment {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError("config error at '" + path + "': " + message);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.count(item.key())) {
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
        }
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

double positive(const json& v, const std::string& path) {
    const double x = number(v, path);
    if (!(x > 0.0)) fail(path, "must be positive");
    return x;
}

std::size_t count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) fail(path, "expected a positive integer");
    return v.get<std::size_t>();
}

cplx complex_value(const json& v, const std::string& path) {
    if (v.is_number()) return number(v, path);
    if (v.is_array() && v.size() == 2) return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    fail(path, "expected a number or a [re, im] pair");
}

std::vector<double> real_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

double phase_value(const json& v, const std::string& path) {
    double phi = 0.0;
    if (v.is_string()) {
        const std::string text = v.get<std::string>();
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                phi = std::stod(text);
            } else {
                const double num = std::stod(text.substr(0, slash));
                const double den = std::stod(text.substr(slash + 1));
                if (den == 0.0) fail(path, "zero denominator");
                phi = num / den;
            }
        } catch (const std::logic_error&) {
            fail(path, "expected a number or a fraction such as \"1/3\"");
        }
    } else {
        phi = number(v, path);
    }
    if (!(phi >= 0.0 && phi < 1.0)) fail(path, "phase must lie in [0, 1)");
    return phi;
}

ModelConfig parse_model(const json& m) {
    const std::string path = "model";
    if (!m.contains("kind") || !m["kind"].is_string()) fail(join(path, "kind"), "expected one of four_level, six_level, custom");
    const std::string kind = m["kind"].get<std::string>();
    ModelConfig out;
    if (kind == "four_level") {
        reject_unknown(m, path, {"kind", "E", "V"});
        out.kind = ModelKind::FourLevel;
        if (m.contains("E")) out.energy = positive(m["E"], join(path, "E"));
        out.coupling = m.contains("V") ? complex_value(m["V"], join(path, "V")) : out.energy * cplx(1.0, 1.0 / 3.0);
    } else if (kind == "six_level") {
        reject_unknown(m, path, {"kind", "Omega1", "Omega2", "H0"});
        out.kind = ModelKind::SixLevel;
        if (!m.contains("Omega1") || !m.contains("Omega2")) fail(path, "six_level needs Omega1 and Omega2");
        out.omega1 = complex_value(m["Omega1"], join(path, "Omega1"));
        out.omega2 = complex_value(m["Omega2"], join(path, "Omega2"));
        if (m.contains("H0")) {
            out.h0_diagonal = real_list(m["H0"], join(path, "H0"));
            if (out.h0_diagonal.size() != 6) fail(join(path, "H0"), "six_level needs 6 diagonal energies");
        }
    } else if (kind == "custom") {
        reject_unknown(m, path, {"kind", "H0", "H1_first_column"});
        out.kind = ModelKind::Custom;
        if (!m.contains("H0") || !m.contains("H1_first_column")) fail(path, "custom needs H0 and H1_first_column");
        out.h0_diagonal = real_list(m["H0"], join(path, "H0"));
        const auto& col = m["H1_first_column"];
        if (!col.is_array()) fail(join(path, "H1_first_column"), "expected an array");
        for (std::size_t i = 0; i < col.size(); ++i)
            out.h1_first_column.push_back(complex_value(col[i], join(path, "H1_first_column[" + std::to_string(i) + "]")));
        if (out.h1_first_column.size() != out.h0_diagonal.size())
            fail(join(path, "H1_first_column"), "length must match H0");
        if (out.h0_diagonal.size() < 2) fail(join(path, "H0"), "need at least two levels");
    } else {
        fail(join(path, "kind"), "unknown model kind '" + kind + "'");
    }
    return out;
}

PulseConfig parse_pulses(const json& p) {
    reject_unknown(p, "pulses", {"kind", "T", "tau"});
    PulseConfig out;
    if (p.contains("kind")) {
        if (!p["kind"].is_string()) fail("pulses.kind", "expected \"tanh\" or \"sech_masked\"");
        const std::string kind = p["kind"].get<std::string>();
        if (kind == "tanh") {
            out.kind = PulseKind::Tanh;
        } else if (kind == "sech_masked") {
            out.kind = PulseKind::SechMasked;
        } else {
            fail("pulses.kind", "expected \"tanh\" or \"sech_masked\"");
        }
    }
    if (p.contains("T")) out.crossing_time = positive(p["T"], "pulses.T");
    out.mask_width = p.contains("tau") ? positive(p["tau"], "pulses.tau") : out.crossing_time;
    if (out.kind == PulseKind::Tanh && p.contains("tau")) fail("pulses.tau", "only meaningful for sech_masked pulses");
    return out;
}

QpeSettings parse_qpe(const json& q) {
    reject_unknown(q, "qpe", {"phi", "r", "backend", "shots", "seed"});
    QpeSettings out;
    if (q.contains("phi")) out.phi = phase_value(q["phi"], "qpe.phi");
    if (q.contains("r")) out.register_qubits = static_cast<unsigned>(count(q["r"], "qpe.r"));
    if (q.contains("backend")) {
        if (!q["backend"].is_string()) fail("qpe.backend", "expected \"simulator\" or \"ideal\"");
        const std::string b = q["backend"].get<std::string>();
        if (b == "simulator") {
            out.backend = QpeBackend::Simulator;
        } else if (b == "ideal") {
            out.backend = QpeBackend::IdealOracle;
        } else {
            fail("qpe.backend", "expected \"simulator\" or \"ideal\"");
        }
    }
    if (q.contains("shots")) {
        if (!q["shots"].is_number_integer() || q["shots"].get<long long>() < 0) fail("qpe.shots", "expected a non-negative integer");
        out.shots = q["shots"].get<std::size_t>();
    }
    if (q.contains("seed")) {
        if (!q["seed"].is_number_unsigned()) fail("qpe.seed", "expected a non-negative integer");
        out.seed = q["seed"].get<std::uint64_t>();
    }
    return out;
}

}  // namespace

PulsePair PulseConfig::make() const {
    return kind == PulseKind::Tanh ? PulsePair::tanh(crossing_time) : PulsePair::sech_masked(crossing_time, mask_width);
}

TimeWindow ExperimentConfig::effective_window() const { return window.value_or(default_window(pulses.make())); }

ExperimentConfig parse_config(const json& doc) {
    reject_unknown(doc, "", {"description", "model", "pulses", "window", "steps", "grid_points", "direction", "qpe", "sweep"});
    ExperimentConfig out;
    out.source = doc;
    if (doc.contains("description") && !doc["description"].is_string()) fail("description", "expected a string");
    if (doc.contains("model")) out.model = parse_model(doc["model"]);
    if (doc.contains("pulses")) out.pulses = parse_pulses(doc["pulses"]);
    if (doc.contains("window")) {
        const auto w = real_list(doc["window"], "window");
        if (w.size() != 2 || !(w[1] > w[0])) fail("window", "expected [start, stop] with start < stop");
        out.window = TimeWindow{w[0], w[1]};
    }
    if (doc.contains("steps")) out.steps = count(doc["steps"], "steps");
    if (doc.contains("grid_points")) {
        out.grid_points = count(doc["grid_points"], "grid_points");
        if (*out.grid_points < 2) fail("grid_points", "need at least 2 points");
    }
    if (doc.contains("direction")) {
        const auto& d = doc["direction"];
        if (d == "forward") {
            out.direction = Direction::Forward;
        } else if (d == "inverse") {
            out.direction = Direction::Inverse;
        } else {
            fail("direction", "expected \"forward\" or \"inverse\"");
        }
    }
    if (doc.contains("qpe")) out.qpe = parse_qpe(doc["qpe"]);
    if (doc.contains("sweep")) {
        reject_unknown(doc["sweep"], "sweep", {"ET"});
        if (doc["sweep"].contains("ET")) {
            out.sweep_et = real_list(doc["sweep"]["ET"], "sweep.ET");
            for (std::size_t i = 0; i < out.sweep_et.size(); ++i)
                if (!(out.sweep_et[i] > 0.0)) fail("sweep.ET[" + std::to_string(i) + "]", "must be positive");
        }
    }
    return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

ModelMatrices schedule_matrices(const ModelConfig& model) {
    ModelMatrices out;
    switch (model.kind) {
        case ModelKind::FourLevel: {
            auto four = build_four_level(model.energy, model.coupling);
            out.h0 = std::move(four.h0);
            out.h1 = std::move(four.h1);
            out.warnings = std::move(four.warnings);
            break;
        }
        case ModelKind::SixLevel: {
            if (model.h0_diagonal.empty())
                throw ConfigError("config error at 'model.H0': six_level schedules need 6 diagonal energies");
            const auto six = build_six_level(model.omega1, model.omega2);
            auto reduction = phase_equivalent_circulant(six.h1);
            out.h0 = ComplexMatrix::diagonal(model.h0_diagonal);
            out.h1 = materialize(reduction.spec);
            out.gauge = std::move(reduction);
            break;
        }
        case ModelKind::Custom:
            out.h0 = ComplexMatrix::diagonal(model.h0_diagonal);
            out.h1 = materialize(CirculantSpec(model.h1_first_column));
            break;
    }
    return out;
}

Schedule make_schedule(const ExperimentConfig& config, Direction direction) {
    auto m = schedule_matrices(config.model);
    return Schedule(config.pulses.make(), std::move(m.h0), std::move(m.h1), direction, config.effective_window(),
                    config.steps);
}

QpeConfig make_qpe_config(const ExperimentConfig& config) {
    auto m = schedule_matrices(config.model);
    QpeConfig q;
    q.h0 = std::move(m.h0);
    q.h1 = std::move(m.h1);
    q.pulses = config.pulses.make();
    q.window = config.effective_window();
    q.steps = config.steps;
    q.backend = config.qpe.backend;
    q.shots = config.qpe.shots;
    q.seed = config.qpe.seed;
    return q;
}

ExperimentConfig with_energy_time(const ExperimentConfig& config, double et) {
    if (config.model.kind != ModelKind::FourLevel) throw ConfigError("config error at 'model.kind': sweeps need a four_level model");
    ExperimentConfig out = config;
    const double energy = et / config.pulses.crossing_time;
    out.model.coupling = config.model.coupling * (energy / config.model.energy);
    out.model.energy = energy;
    return out;
}

}  // namespace circqft::experiment
