#include "experiment/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include "circqft/circulant.hpp"
#include "circqft/errors.hpp"
#include "circqft/models.hpp"
#include "circqft/propagator.hpp"
#include "circqft/qpe.hpp"
#include "circqft/schedule.hpp"
#include "experiment/output.hpp"

namespace circqft::experiment {

using nlohmann::json;

namespace {

using Rows = std::vector<std::vector<std::string>>;

std::string fmt(double x) { return format_number(x); }

std::string bits_text(const Bits& bits) {
    std::string s;
    for (int b : bits) s += static_cast<char>('0' + b);
    return s;
}

std::string direction_name(Direction d) { return d == Direction::Forward ? "forward" : "inverse"; }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void add_matrix_rows(Rows& rows, const std::string& name, const ComplexMatrix& m) {
    for (std::size_t j = 0; j < m.dim(); ++j)
        for (std::size_t k = 0; k < m.dim(); ++k)
            rows.push_back({name, std::to_string(j), std::to_string(k), fmt(m(j, k).real()), fmt(m(j, k).imag())});
}

std::vector<double> sorted_real_eigenvalues(const ComplexMatrix& m) {
    auto values = hermitian_eigen(m).values;
    std::sort(values.begin(), values.end());
    return values;
}

class Artifacts {
public:
    explicit Artifacts(const RunOptions& options) : options_(options) {}

    void csv(const std::string& name, const std::vector<std::string>& header, const Rows& rows) {
        write_csv(options_.out_dir / name, header, rows);
        report_.outputs.push_back(name);
    }

    void svg(const std::string& name, const std::vector<Panel>& panels) {
        if (!options_.svg) return;
        write_svg(options_.out_dir / name, panels);
        report_.outputs.push_back(name);
    }

    json& summary() { return report_.summary; }
    CommandReport take() { return std::move(report_); }

private:
    const RunOptions& options_;
    CommandReport report_;
};

}  // namespace

CommandReport cmd_eigentraj(const ExperimentConfig& config, const RunOptions& options) {
    const Schedule schedule = make_schedule(config, config.direction);
    const auto grid = uniform_grid(schedule.window(), config.effective_grid_points());
    const auto traj = eigen_trajectories(schedule, grid);
    const std::size_t n = schedule.dim();

    Artifacts out(options);
    std::vector<std::string> header{"t"};
    for (std::size_t k = 0; k < n; ++k) header.push_back("eps_" + std::to_string(k));
    Rows rows;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<std::string> row{fmt(traj.times[i])};
        for (double e : traj.energies[i]) row.push_back(fmt(e));
        rows.push_back(std::move(row));
    }
    out.csv("eigentraj.csv", header, rows);

    Panel panel{"Instantaneous eigenvalues", "t", "energy", {}};
    for (std::size_t k = 0; k < n; ++k) {
        Series s{"eps_" + std::to_string(k), traj.times, {}};
        for (const auto& e : traj.energies) s.y.push_back(e[k]);
        panel.series.push_back(std::move(s));
    }
    out.svg("eigentraj.svg", {panel});

    out.summary()["points"] = traj.times.size();
    out.summary()["min_gap"] = traj.min_gap;
    out.summary()["min_gap_time"] = traj.min_gap_time;
    out.summary()["crossings"] = !(traj.min_gap > 0.0);
    return out.take();
}

CommandReport cmd_evolve(const ExperimentConfig& config, const RunOptions& options) {
    const Schedule schedule = make_schedule(config, config.direction);
    const auto result = evolve(schedule);
    const ComplexMatrix& u = result.final;
    const std::size_t n = u.dim();

    Artifacts out(options);
    Rows prop;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            prop.push_back({std::to_string(j), std::to_string(k), fmt(std::abs(u(j, k))), fmt(std::arg(u(j, k)))});
    out.csv("propagator.csv", {"row", "col", "modulus", "phase"}, prop);

    json& s = out.summary();
    s["direction"] = direction_name(schedule.direction());
    s["steps"] = schedule.steps();
    s["unitarity_drift"] = result.unitarity_drift;
    if (result.convergence_estimate) s["convergence_estimate"] = *result.convergence_estimate;
    double min_mod = 1e300, max_mod = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            min_mod = std::min(min_mod, std::abs(u(j, k)));
            max_mod = std::max(max_mod, std::abs(u(j, k)));
        }
    s["modulus_range"] = json::array({min_mod, max_mod});

    const auto fact = factor_phased_dft(u, schedule.direction());
    Permutation predicted = predict_permutation(schedule.h0(), schedule.h1());
    if (schedule.direction() == Direction::Inverse) predicted = invert(predicted);
    const auto phases = adiabatic_phase_prediction(schedule);

    Rows rows;
    for (std::size_t k = 0; k < n; ++k) {
        rows.push_back({std::to_string(k), std::to_string(fact.sigma[k]), std::to_string(predicted[k]),
                        fmt(fact.alpha[k]), fmt(phases.dynamical[k]), fmt(phases.geometric[k]),
                        fmt(phases.total[k]), fmt(wrap_phase(fact.alpha[k] - phases.total[k]))});
    }
    out.csv("factorization.csv",
            {"index", "sigma", "predicted_sigma", "alpha", "dynamical", "geometric", "adiabatic", "alpha_minus_adiabatic"},
            rows);

    s["residual"] = fact.residual;
    s["sigma"] = fact.sigma;
    s["sigma_matches_prediction"] = fact.sigma == predicted;
    s["residual_accepted"] = fact.residual <= kFactorizationAccept;
    return out.take();
}

CommandReport cmd_adiabaticity(const ExperimentConfig& config, const RunOptions& options) {
    const Schedule schedule = make_schedule(config, config.direction);
    const auto grid = uniform_grid(schedule.window(), config.effective_grid_points());
    const auto report = adiabaticity_report(schedule, grid);

    Artifacts out(options);
    Rows rows;
    for (std::size_t i = 0; i < report.times.size(); ++i)
        rows.push_back({fmt(report.times[i]), fmt(report.min_gap[i]), fmt(report.max_coupling[i])});
    out.csv("adiabaticity.csv", {"t", "min_gap", "max_coupling"}, rows);
    out.svg("adiabaticity.svg", {Panel{"Smallest gap", "t", "gap", {Series{"min_gap", report.times, report.min_gap}}},
                                 Panel{"Largest nonadiabatic coupling", "t", "coupling",
                                       {Series{"max_coupling", report.times, report.max_coupling}}}});

    json& s = out.summary();
    s["overall_min_gap"] = report.overall_min_gap;
    s["overall_max_coupling"] = report.overall_max_coupling;
    s["margin"] = std::isfinite(report.margin) ? json(report.margin) : json("inf");
    s["margin_time"] = report.margin_time;
    s["heuristic_coupling_scale"] = report.heuristic_coupling_scale;
    s["degeneracy_warnings"] = report.warnings.size();
    return out.take();
}

CommandReport cmd_qpe(const ExperimentConfig& config, const RunOptions& options) {
    const auto& q = config.qpe;
    const QpeConfig qcfg = make_qpe_config(config);
    const auto result = run_qpe(q.phi, q.register_qubits, qcfg);

    QpeConfig ideal_cfg = qcfg;
    ideal_cfg.backend = QpeBackend::IdealOracle;
    ideal_cfg.shots = 0;
    const auto ideal = run_qpe(q.phi, q.register_qubits, ideal_cfg);

    Artifacts out(options);
    Rows trace;
    Series fs{"f(t)", {}, {}}, gs{"g(t)", {}, {}}, ps{"P(t)", {}, {}};
    for (const auto& sample : result.fidelity_trace) {
        trace.push_back({fmt(sample.t), fmt(sample.f), fmt(sample.g), fmt(sample.probability)});
        fs.x.push_back(sample.t), fs.y.push_back(sample.f);
        gs.x.push_back(sample.t), gs.y.push_back(sample.g);
        ps.x.push_back(sample.t), ps.y.push_back(sample.probability);
    }
    out.csv("qpe_trace.csv", {"t", "f", "g", "P"}, trace);

    const std::size_t n = result.relabeled_distribution.size();
    const Permutation sigma_inv = invert(result.sigma);
    Rows dist;
    for (std::size_t k = 0; k < n; ++k) {
        Bits bits(q.register_qubits);
        for (unsigned b = 0; b < q.register_qubits; ++b) bits[b] = static_cast<int>((k >> (q.register_qubits - 1 - b)) & 1U);
        std::vector<std::string> row{std::to_string(k), bits_text(bits), std::to_string(sigma_inv[k]),
                                     fmt(result.relabeled_distribution[k]), fmt(ideal.relabeled_distribution[k])};
        if (!result.counts.empty()) row.push_back(std::to_string(result.counts[k]));
        dist.push_back(std::move(row));
    }
    std::vector<std::string> header{"outcome", "bits", "basis_state", "probability", "ideal_probability"};
    if (!result.counts.empty()) header.push_back("counts");
    out.csv("qpe_distribution.csv", header, dist);

    out.svg("qpe.svg", {Panel{"Pulses", "t", "amplitude", {fs, gs}},
                        Panel{"Target-state probability", "t", "probability", {ps}}});

    json& s = out.summary();
    s["phi"] = q.phi;
    s["r"] = q.register_qubits;
    s["backend"] = q.backend == QpeBackend::Simulator ? "simulator" : "ideal";
    s["exact_expansion"] = result.expansion.exact;
    s["target_bits"] = bits_text(result.expansion.bits);
    s["top_bits"] = bits_text(result.top_bits);
    s["top_probability"] = result.relabeled_distribution[result.top_outcome];
    s["nearest_probability"] = result.nearest_probability;
    s["final_fidelity"] = result.final_fidelity;
    s["total_variation_vs_ideal"] = total_variation(result.relabeled_distribution, ideal.relabeled_distribution);
    s["unitarity_drift"] = result.unitarity_drift;
    s["sigma"] = result.sigma;
    if (!result.counts.empty()) {
        s["shots"] = q.shots;
        s["seed"] = q.seed;
    }
    return out.take();
}

CommandReport cmd_models(const ExperimentConfig& config, const RunOptions& options) {
    const auto& m = config.model;
    Artifacts out(options);
    json& s = out.summary();
    Rows rows;
    const std::vector<std::string> header{"matrix", "row", "col", "re", "im"};

    switch (m.kind) {
        case ModelKind::FourLevel: {
            const auto four = build_four_level(m.energy, m.coupling);
            add_matrix_rows(rows, "H0", four.h0);
            add_matrix_rows(rows, "H1", four.h1);
            const auto shifts = solve_level_shifts(m.energy);
            s["kind"] = "four_level";
            s["level_shifts"] = {{"zeeman", shifts.zeeman},
                                 {"ground_stark", shifts.ground_stark},
                                 {"excited_stark", shifts.excited_stark}};
            s["h1_spectrum"] = hermitian_circulant_eigenvalues(circulant_from_matrix(four.h1));
            s["warnings"] = four.warnings;
            if (four.warnings.empty()) s["sigma"] = predict_permutation(four.h0, four.h1);
            break;
        }
        case ModelKind::SixLevel: {
            const auto six = build_six_level(m.omega1, m.omega2);
            add_matrix_rows(rows, "H1_ring", six.h1);
            s["kind"] = "six_level";
            s["omega_moduli"] = json::array({std::abs(m.omega1), std::abs(m.omega2)});
            const GaugeReduction reduction = [&] {
                try {
                    return phase_equivalent_circulant(six.h1);
                } catch (const GaugeError& e) {
                    out.csv("models.csv", header, rows);
                    throw GaugeError("modulus mismatch: |Omega1| = " + fmt(std::abs(m.omega1)) +
                                     ", |Omega2| = " + fmt(std::abs(m.omega2)) + "; " + e.what());
                }
            }();
            const ComplexMatrix circ = materialize(reduction.spec);
            add_matrix_rows(rows, "H1_circulant", circ);
            s["beta"] = reduction.beta;
            s["loop_product"] = complex_json(reduction.loop_product);
            s["first_column"] = json::array();
            for (std::size_t k = 0; k < reduction.spec.size(); ++k) s["first_column"].push_back(complex_json(reduction.spec[k]));
            s["gauge_residual"] = reduction.residual;
            const auto ring = sorted_real_eigenvalues(six.h1);
            auto circ_spec = hermitian_circulant_eigenvalues(reduction.spec);
            std::sort(circ_spec.begin(), circ_spec.end());
            double diff = 0.0;
            for (std::size_t k = 0; k < ring.size(); ++k) diff = std::max(diff, std::abs(ring[k] - circ_spec[k]));
            s["spectrum"] = circ_spec;
            s["spectrum_deviation"] = diff;
            // The ring's spectrum is always pairwise degenerate; report the clusters.
            json clusters = json::array();
            const double scale = std::max(1.0, std::abs(circ_spec.back()));
            for (std::size_t k = 0; k + 1 < circ_spec.size(); ++k)
                if (circ_spec[k + 1] - circ_spec[k] <= 1e-9 * scale) clusters.push_back(json::array({k, k + 1}));
            s["degenerate_pairs"] = clusters;
            if (!m.h0_diagonal.empty()) s["h0"] = m.h0_diagonal;
            break;
        }
        case ModelKind::Custom: {
            const auto h0 = ComplexMatrix::diagonal(m.h0_diagonal);
            const CirculantSpec spec(m.h1_first_column);
            add_matrix_rows(rows, "H0", h0);
            add_matrix_rows(rows, "H1", materialize(spec));
            s["kind"] = "custom";
            s["h1_hermitian"] = spec.is_hermitian();
            if (spec.is_hermitian()) s["h1_spectrum"] = hermitian_circulant_eigenvalues(spec);
            break;
        }
    }
    out.csv("models.csv", header, rows);
    return out.take();
}

CommandReport cmd_sweep(const ExperimentConfig& config, const RunOptions& options) {
    struct Point {
        double et = 0.0, energy = 0.0, residual = 0.0, fidelity = 0.0, drift = 0.0;
    };
    std::vector<std::future<Point>> jobs;
    for (double et : config.sweep_et) {
        jobs.push_back(std::async(std::launch::async, [&config, et] {
            const ExperimentConfig point = with_energy_time(config, et);
            const Schedule schedule = make_schedule(point, point.direction);
            EvolutionOptions eo;
            eo.estimate_convergence = false;
            const auto run = evolve(schedule, eo);
            const auto fact = factor_phased_dft(run.final, schedule.direction());
            QpeConfig qcfg = make_qpe_config(point);
            qcfg.shots = 0;
            qcfg.trace_stride = point.steps;
            const auto qpe = run_qpe(point.qpe.phi, point.qpe.register_qubits, qcfg);
            return Point{et, point.model.energy, fact.residual, qpe.final_fidelity,
                         std::max(run.unitarity_drift, qpe.unitarity_drift)};
        }));
    }
    // Collect in submission order; get() rethrows the first failure.
    std::vector<Point> points;
    for (auto& job : jobs) points.push_back(job.get());

    Artifacts out(options);
    Rows rows;
    Series residual{"residual", {}, {}}, fidelity{"final_fidelity", {}, {}};
    for (const auto& p : points) {
        rows.push_back({fmt(p.et), fmt(p.energy), fmt(p.residual), fmt(p.fidelity), fmt(p.drift)});
        residual.x.push_back(p.et), residual.y.push_back(p.residual);
        fidelity.x.push_back(p.et), fidelity.y.push_back(p.fidelity);
    }
    out.csv("sweep.csv", {"ET", "E", "residual", "final_fidelity", "unitarity_drift"}, rows);
    out.svg("sweep.svg", {Panel{"Factorization residual", "E T", "residual", {residual}},
                          Panel{"QPE final fidelity", "E T", "fidelity", {fidelity}}});

    // Nonincreasing residual within 10% slack, with ET sorted ascending.
    std::vector<Point> sorted = points;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) { return a.et < b.et; });
    bool monotone = true;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].residual > 1.1 * sorted[i - 1].residual) monotone = false;
    out.summary()["points"] = points.size();
    out.summary()["residual_monotone"] = monotone;
    return out.take();
}

const std::vector<std::string_view>& command_names() {
    static const std::vector<std::string_view> names{"eigentraj", "evolve", "adiabaticity", "qpe", "models", "sweep"};
    return names;
}

int report_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegeneracyError& e) {
        err << "physics error: " << e.what();
        if (std::isfinite(e.time())) err << " (t = " << e.time() << ")";
        err << '\n';
        return kExitPhysics;
    } catch (const PhysicsError& e) {
        err << "physics error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_command(std::string_view command, const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
    try {
        CommandReport report;
        if (command == "eigentraj") {
            report = cmd_eigentraj(config, options);
        } else if (command == "evolve") {
            report = cmd_evolve(config, options);
        } else if (command == "adiabaticity") {
            report = cmd_adiabaticity(config, options);
        } else if (command == "qpe") {
            report = cmd_qpe(config, options);
        } else if (command == "models") {
            report = cmd_models(config, options);
        } else if (command == "sweep") {
            report = cmd_sweep(config, options);
        } else {
            throw ConfigError("unknown command '" + std::string(command) + "'");
        }
        const std::string meta = std::string(command) + ".meta.json";
        report.outputs.push_back(meta);
        write_metadata(options.out_dir / meta, std::string(command), config.source, report.summary, report.outputs);
        out << report.summary.dump(2) << '\n';
        return kExitOk;
    } catch (...) {
        return report_current_exception(err);
    }
}

}  // namespace circqft::experiment
