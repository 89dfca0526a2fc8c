#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "circqft/linalg.hpp"
#include "circqft/schedule.hpp"

namespace circqft {

/// A bijection on {0..N-1}; perm[i] is the image of i.
using Permutation = std::vector<std::size_t>;

bool is_permutation(const Permutation& perm);
Permutation invert(const Permutation& perm);
Permutation identity_permutation(std::size_t n);

using HamiltonianFn = std::function<ComplexMatrix(double)>;

struct EvolutionOptions {
    /// Record U every `sample_stride` steps (0: only the endpoints).
    std::size_t sample_stride = 0;
    /// Re-run at twice the step count and report ||U_n - U_2n||_F.
    bool estimate_convergence = true;
};

struct EvolutionResult {
    std::vector<double> times;         ///< times of `samples`; front is t_min, back is t_max
    std::vector<ComplexMatrix> samples;
    ComplexMatrix final;
    double unitarity_drift = 0.0;      ///< max ||U^H U - I||_F over samples
    std::optional<double> convergence_estimate;
};

/// Maximum unitarity drift tolerated before a run is rejected.
inline constexpr double kUnitarityTolerance = 1e-8;

/// Solves i dU/dt = H(t) U, U(t_min) = I, by exponential midpoint steps
/// U <- exp(-i H(t_k + dt/2) dt) U on a uniform grid.
///
/// Throws IntegrationError when the drift exceeds kUnitarityTolerance or an
/// entry becomes non-finite.
EvolutionResult evolve(const HamiltonianFn& hamiltonian, const TimeWindow& window, std::size_t steps,
                       const EvolutionOptions& options = {});
EvolutionResult evolve(const Schedule& schedule, const EvolutionOptions& options = {});

/// Final propagator only, no diagnostics beyond the finiteness check.
ComplexMatrix propagate(const HamiltonianFn& hamiltonian, const TimeWindow& window, std::size_t steps);

/// The matrix of a phased, renumbered DFT.
///
/// Forward: |n> -> e^{i alpha_n} (DFT column sigma(n)), i.e. F P_sigma D(alpha).
/// Inverse: (DFT column n) -> e^{-i alpha_n} |sigma(n)>, i.e. P_sigma D(-alpha) F^H.
ComplexMatrix phased_dft(const Permutation& sigma, std::span<const double> alpha, Direction direction);

struct PhasedDftFactorization {
    Permutation sigma;
    std::vector<double> alpha;  ///< radians, wrapped to (-pi, pi]
    double residual = 0.0;      ///< ||U - phased_dft(sigma, alpha)||_F
};

/// Factorization residual accepted for demo runs (E T = 10).
inline constexpr double kFactorizationAccept = 0.05;

/// Reads sigma from the dominant overlap of each column with the DFT (or
/// basis) columns and alpha from that overlap's phase.
///
/// Throws PreconditionError if U is not unitary to 1e-8, AmbiguityError if
/// the two largest overlaps of a column are within 1e-3 or two columns claim
/// the same target.
PhasedDftFactorization factor_phased_dft(const ComplexMatrix& u, Direction direction);

/// Adiabatic renumbering: sigma(j) is the index n of the circulant eigenvalue
/// whose ascending rank equals the rank of H0's j-th diagonal entry.
/// Throws DegeneracyError if either spectrum has a cluster.
Permutation predict_permutation(const ComplexMatrix& h0, const ComplexMatrix& h1);

/// Trapezoidal integrals of the ascending-ranked instantaneous eigenvalues over
/// `grid`. Throws DegeneracyError (with the time) when a nonzero H(t) has a cluster.
std::vector<double> branch_phase_integrals(const HamiltonianFn& hamiltonian, std::span<const double> grid);

/// Dynamical phases -integral(eps) in the factorization's alpha convention.
///
/// Forward: entry j belongs to the branch starting in |j>, alpha_j = -integral.
/// Inverse: entry n belongs to the branch starting in DFT column n; because
/// the inverse transform carries e^{-i alpha}, alpha_n = +integral.
/// Wrapped to (-pi, pi].
std::vector<double> dynamical_phase_prediction(const Schedule& schedule);

struct AdiabaticPhasePrediction {
    std::vector<double> dynamical;  ///< as dynamical_phase_prediction
    std::vector<double> geometric;  ///< open-path (Pancharatnam) phase, same convention
    std::vector<double> total;      ///< wrapped dynamical + geometric
};

/// Dynamical phase plus the geometric phase picked up by the parallel-transported
/// eigenvector between its fixed endpoint vectors (basis state and DFT column).
/// The geometric term is the phase of
///   <end|chi(t_K)> prod_k <chi(t_{k+1})|chi(t_k)> <chi(t_0)|start>.
AdiabaticPhasePrediction adiabatic_phase_prediction(const Schedule& schedule);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double angle);

}  // namespace circqft
