#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "circqft/linalg.hpp"
#include "circqft/propagator.hpp"
#include "circqft/schedule.hpp"

namespace circqft {

/// Register bits, most significant first: phi = 0.b1 b2 ... br.
using Bits = std::vector<int>;

/// phi = sum_j b_j 2^{-j}. Throws PreconditionError for entries outside {0, 1}.
double binary_fraction(std::span<const int> bits);

struct BitExpansion {
    Bits bits;
    std::size_t index = 0;  ///< integer value of `bits`
    double value = 0.0;     ///< binary_fraction(bits)
    bool exact = false;     ///< phi * 2^r is an integer
};

/// Exact r-bit expansion of phi when it exists, otherwise the nearest r-bit
/// value on the phase circle (so 0.99 with r = 2 rounds to 0).
BitExpansion to_bits(double phi, unsigned r);

/// First-register state after the controlled-U stage:
/// 2^{-r/2} sum_k e^{2 pi i k phi} |k>.
ComplexVector prepare_register_state(double phi, unsigned r);

/// Phased inverse QFT with renumbering: DFT column n goes to
/// e^{-i alpha_n} |sigma(n)>.
ComplexMatrix ideal_phased_inverse_qft(std::span<const double> alpha, const Permutation& sigma);

/// Forward counterpart: |n> goes to e^{i alpha_n} (DFT column sigma(n)).
ComplexMatrix ideal_phased_qft(std::span<const double> alpha, const Permutation& sigma);

/// |<k|U|psi>|^2 for every k.
std::vector<double> outcome_distribution(const ComplexMatrix& u, std::span<const cplx> psi);

double total_variation(std::span<const double> p, std::span<const double> q);

enum class QpeBackend { Simulator, IdealOracle };

struct QpeConfig {
    ComplexMatrix h0;
    ComplexMatrix h1;
    PulsePair pulses = PulsePair::sech_masked(1.0, 1.0);
    std::optional<TimeWindow> window;  ///< default_window(pulses) when empty
    std::size_t steps = kDefaultSteps;
    QpeBackend backend = QpeBackend::Simulator;
    std::vector<double> oracle_alpha;  ///< IdealOracle phases; zeros when empty
    std::size_t trace_stride = 1;      ///< fidelity sample every n steps
    std::size_t shots = 0;             ///< > 0 enables sampled measurement
    std::uint64_t seed = 0;
};

struct FidelitySample {
    double t = 0.0;
    double f = 0.0;
    double g = 0.0;
    double probability = 0.0;
};

struct QpeResult {
    BitExpansion expansion;                  ///< target bits derived from phi
    Permutation sigma;                       ///< predicted renumbering (forward sense)
    std::vector<double> distribution;        ///< over basis states |k>
    std::vector<double> relabeled_distribution;  ///< index n = sigma(k)
    std::size_t top_outcome = 0;             ///< argmax of relabeled_distribution
    Bits top_bits;
    double nearest_probability = 0.0;        ///< relabeled probability of expansion.index
    std::vector<FidelitySample> fidelity_trace;
    double final_fidelity = 0.0;
    double unitarity_drift = 0.0;
    std::vector<std::size_t> counts;         ///< sampled mode only, relabeled outcomes
};

/// Phase estimation with the adiabatically synthesized inverse QFT.
///
/// Evolves the register state under the Inverse schedule and tracks the
/// probability of the sigma-renumbered target basis state. Relabeling applies
/// sigma classically so outcome n reads as the bits of n.
///
/// Throws PreconditionError when 2^r differs from the model dimension.
QpeResult run_qpe(double phi, unsigned r, const QpeConfig& config);

}  // namespace circqft
