#include "circqft/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "circqft/circulant.hpp"
#include "circqft/errors.hpp"

namespace circqft {

double binary_fraction(std::span<const int> bits) {
    double phi = 0.0;
    double weight = 0.5;
    for (int b : bits) {
        if (b != 0 && b != 1) throw PreconditionError("binary_fraction: bits must be 0 or 1");
        phi += b * weight;
        weight *= 0.5;
    }
    return phi;
}

namespace {

std::size_t register_size(unsigned r) {
    if (r == 0) throw PreconditionError("register needs at least one qubit");
    if (r > 30) throw PreconditionError("register too large for dense simulation");
    return std::size_t{1} << r;
}

Bits bits_of(std::size_t index, unsigned r) {
    Bits bits(r);
    for (unsigned j = 0; j < r; ++j) bits[j] = static_cast<int>((index >> (r - 1 - j)) & 1U);
    return bits;
}

void require_phase(double phi) {
    if (!(phi >= 0.0 && phi < 1.0)) throw PreconditionError("phase phi must lie in [0, 1)");
}

}  // namespace

BitExpansion to_bits(double phi, unsigned r) {
    require_phase(phi);
    const std::size_t n = register_size(r);
    const double scaled = phi * static_cast<double>(n);
    const double nearest = std::round(scaled);
    BitExpansion out;
    out.exact = scaled == nearest;
    out.index = static_cast<std::size_t>(nearest) % n;
    out.bits = bits_of(out.index, r);
    out.value = binary_fraction(out.bits);
    return out;
}

ComplexVector prepare_register_state(double phi, unsigned r) {
    require_phase(phi);
    const std::size_t n = register_size(r);
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexVector psi(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k * phi reduced mod 1 keeps the argument small for large k.
        const double turns = std::fmod(static_cast<double>(k) * phi, 1.0);
        psi[k] = std::polar(amplitude, 2.0 * std::numbers::pi * turns);
    }
    return psi;
}

ComplexMatrix ideal_phased_inverse_qft(std::span<const double> alpha, const Permutation& sigma) {
    return phased_dft(sigma, alpha, Direction::Inverse);
}

ComplexMatrix ideal_phased_qft(std::span<const double> alpha, const Permutation& sigma) {
    return phased_dft(sigma, alpha, Direction::Forward);
}

std::vector<double> outcome_distribution(const ComplexMatrix& u, std::span<const cplx> psi) {
    const ComplexVector out = u * psi;
    std::vector<double> p(out.size());
    std::transform(out.begin(), out.end(), p.begin(), [](const cplx& a) { return std::norm(a); });
    return p;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw PreconditionError("total_variation: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

QpeResult run_qpe(double phi, unsigned r, const QpeConfig& config) {
    const std::size_t n = register_size(r);
    if (config.h0.dim() != n || config.h1.dim() != n) {
        std::ostringstream os;
        os << "run_qpe: register of " << r << " qubits needs a " << n << "-level model, got "
           << config.h0.dim();
        throw PreconditionError(os.str());
    }

    QpeResult out;
    out.expansion = to_bits(phi, r);
    out.sigma = predict_permutation(config.h0, config.h1);
    const Permutation to_basis = invert(out.sigma);  // DFT index -> basis state
    const std::size_t target = to_basis[out.expansion.index];
    const ComplexVector psi0 = prepare_register_state(phi, r);

    ComplexMatrix u_final;
    if (config.backend == QpeBackend::Simulator) {
        const TimeWindow window = config.window.value_or(default_window(config.pulses));
        const Schedule schedule(config.pulses, config.h0, config.h1, Direction::Inverse, window, config.steps);
        EvolutionOptions options;
        options.sample_stride = std::max<std::size_t>(1, config.trace_stride);
        options.estimate_convergence = false;
        const EvolutionResult run = evolve(schedule, options);
        out.unitarity_drift = run.unitarity_drift;
        out.fidelity_trace.reserve(run.samples.size());
        for (std::size_t i = 0; i < run.samples.size(); ++i) {
            const auto [f, g] = config.pulses(run.times[i]);
            const ComplexVector psi = run.samples[i] * psi0;
            out.fidelity_trace.push_back({run.times[i], f, g, std::norm(psi[target])});
        }
        u_final = run.final;
    } else {
        std::vector<double> alpha = config.oracle_alpha;
        if (alpha.empty()) alpha.assign(n, 0.0);
        u_final = ideal_phased_inverse_qft(alpha, to_basis);
    }

    out.distribution = outcome_distribution(u_final, psi0);
    out.relabeled_distribution.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.relabeled_distribution[out.sigma[k]] = out.distribution[k];
    out.final_fidelity = out.distribution[target];
    if (out.fidelity_trace.empty()) {
        const double t_end = config.window.value_or(default_window(config.pulses)).stop;
        const auto [f, g] = config.pulses(t_end);
        out.fidelity_trace.push_back({t_end, f, g, out.final_fidelity});
    }
    out.top_outcome = static_cast<std::size_t>(
        std::max_element(out.relabeled_distribution.begin(), out.relabeled_distribution.end()) -
        out.relabeled_distribution.begin());
    out.top_bits = bits_of(out.top_outcome, r);
    out.nearest_probability = out.relabeled_distribution[out.expansion.index];

    if (config.shots > 0) {
        std::mt19937_64 rng(config.seed);
        std::discrete_distribution<std::size_t> measure(out.relabeled_distribution.begin(),
                                                        out.relabeled_distribution.end());
        out.counts.assign(n, 0);
        for (std::size_t s = 0; s < config.shots; ++s) ++out.counts[measure(rng)];
    }
    return out;
}

}  // namespace circqft
