#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "circqft/linalg.hpp"

namespace circqft {

enum class PulseKind { Tanh, SechMasked };

struct PulseValues {
    double f = 0.0;
    double g = 0.0;
};

/// The pulse pair (f, g): f precedes g, i.e. g/f runs from 0 to infinity.
///
///   Tanh:        f = [1 - tanh(t/T)]/2,             g = [1 + tanh(t/T)]/2
///   SechMasked:  f = sech(t/tau) [1 - tanh(t/T)],   g = sech(t/tau) [1 + tanh(t/T)]
///
/// Evaluated in logistic form, 1 - tanh(x) = 2/(1 + e^{2x}), so g/f equals
/// e^{2t/T} without cancellation in the tails.
class PulsePair {
public:
    static PulsePair tanh(double crossing_time);
    static PulsePair sech_masked(double crossing_time, double mask_width);

    PulseKind kind() const noexcept { return kind_; }
    double crossing_time() const noexcept { return crossing_time_; }
    double mask_width() const noexcept { return mask_width_; }

    PulseValues operator()(double t) const;

private:
    PulsePair(PulseKind kind, double crossing_time, double mask_width)
        : kind_(kind), crossing_time_(crossing_time), mask_width_(mask_width) {}

    PulseKind kind_;
    double crossing_time_;
    double mask_width_;
};

PulseValues evaluate_pulses(const PulsePair& pulses, double t);

/// Forward: H(t) = f H0 + g H1 (diagonal -> circulant, synthesizes the QFT).
/// Inverse: H(t) = g H0 + f H1 (circulant -> diagonal, synthesizes its inverse).
enum class Direction { Forward, Inverse };

struct TimeWindow {
    double start = 0.0;
    double stop = 0.0;

    double length() const noexcept { return stop - start; }
    bool contains(double t) const noexcept { return t >= start && t <= stop; }
};

/// Default truncation of the infinite time axis: [-6T, +6T].
TimeWindow default_window(const PulsePair& pulses);

inline constexpr std::size_t kDefaultSteps = 4000;

/// A validated scheduled Hamiltonian.
///
/// H0 must be diagonal with pairwise distinct entries (DegeneracyError
/// otherwise); H1 must be a Hermitian circulant (PreconditionError otherwise).
class Schedule {
public:
    Schedule(PulsePair pulses, ComplexMatrix h0, ComplexMatrix h1, Direction direction,
             TimeWindow window, std::size_t steps = kDefaultSteps);

    /// Same, over default_window(pulses).
    Schedule(PulsePair pulses, ComplexMatrix h0, ComplexMatrix h1, Direction direction,
             std::size_t steps = kDefaultSteps);

    const PulsePair& pulses() const noexcept { return pulses_; }
    const ComplexMatrix& h0() const noexcept { return h0_; }
    const ComplexMatrix& h1() const noexcept { return h1_; }
    Direction direction() const noexcept { return direction_; }
    const TimeWindow& window() const noexcept { return window_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t dim() const noexcept { return h0_.dim(); }

    double step_size() const noexcept { return window_.length() / static_cast<double>(steps_); }

    /// steps + 1 uniformly spaced times spanning the window.
    std::vector<double> grid() const;

    ComplexMatrix hamiltonian_at(double t) const;

    /// Copy with a different step count / direction.
    Schedule with_steps(std::size_t steps) const;
    Schedule with_direction(Direction direction) const;

private:
    PulsePair pulses_;
    ComplexMatrix h0_;
    ComplexMatrix h1_;
    Direction direction_;
    TimeWindow window_;
    std::size_t steps_;
};

ComplexMatrix hamiltonian_at(const Schedule& schedule, double t);

/// Uniform grid of `points` times over `window` (points >= 2).
std::vector<double> uniform_grid(const TimeWindow& window, std::size_t points);

struct EigenTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> energies;  ///< energies[i] ascending at times[i]
    double min_gap = 0.0;                       ///< min over t of the smallest pairwise gap
    double min_gap_time = 0.0;
};

EigenTrajectory eigen_trajectories(const Schedule& schedule, std::span<const double> grid);

struct DegeneracyWarning {
    double time = 0.0;
    std::size_t lower = 0;  ///< rank of the lower eigenvalue of the cluster
    double gap = 0.0;
};

struct AdiabaticityReport {
    std::vector<double> times;
    std::vector<double> min_gap;       ///< per time
    std::vector<double> max_coupling;  ///< per time, max_{m != n} |<d/dt chi_m|chi_n>|
    double overall_min_gap = 0.0;
    double overall_max_coupling = 0.0;
    /// min over time and pairs of |eps_m - eps_n| / |<d/dt chi_m|chi_n>|; +inf when
    /// every coupling vanishes.
    double margin = 0.0;
    double margin_time = 0.0;
    double heuristic_coupling_scale = 0.0;  ///< 1/T
    std::vector<DegeneracyWarning> warnings;
};

/// Nonadiabatic couplings by central differences of the instantaneous
/// eigenvectors, <chi_m(t+d) - chi_m(t-d)|chi_n(t)> / (2d).
///
/// The neighbours chi_m(t +- d) are phase-aligned to chi_m(t) before
/// differencing. `delta` defaults to 1e-4 T. Pairs inside a cluster
/// (gap <= kClusterGap * ||H(t)||) are skipped and reported as warnings.
AdiabaticityReport adiabaticity_report(const Schedule& schedule, std::span<const double> grid,
                                       double delta = 0.0);

}  // namespace circqft
