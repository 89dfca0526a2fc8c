#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "circqft/linalg.hpp"

namespace circqft {

/// Interaction energy of a driven transition, V = hbar Omega / 2 (hbar = 1).
inline cplx coupling_from_rabi(cplx rabi_frequency) { return 0.5 * rabi_frequency; }

/// Four-level ring: H0 = diag(-E, -E/3, E/3, E) and the Hermitian circulant
/// H1 with first column (0, V*, 0, V).
///
/// Serves both the J'=1/2 <-> J''=1/2 sublevels (ordered m'=-1/2, m''=1/2,
/// m'=1/2, m''=-1/2) and the J'=0 <-> J''=1 <-> J'''=0 diamond, which share
/// this ring topology.
struct FourLevelModel {
    double energy = 0.0;
    cplx coupling;
    ComplexMatrix h0;
    ComplexMatrix h1;
    std::vector<std::string> warnings;  ///< e.g. degenerate circulant spectrum
};

/// Throws PreconditionError for E <= 0. V = 0 or real V produce warnings,
/// since the circulant spectrum 2 Re(V i^n) is then degenerate.
FourLevelModel build_four_level(double energy, cplx coupling);

inline constexpr std::array<std::string_view, 4> kHalfToHalfBasis = {"m'=-1/2", "m''=1/2", "m'=1/2",
                                                                     "m''=-1/2"};

/// Zeeman splitting and Stark shifts producing a target diagonal H0 on the
/// J'=1/2 <-> J''=1/2 sublevels.
struct ShiftSolution {
    double zeeman = 0.0;         ///< E_Z, shared by ground and excited level
    double ground_stark = 0.0;   ///< E_g,S
    double excited_stark = 0.0;  ///< E_e,S
};

/// The four level-shift equations in basis order:
///   -E_Z/2 + E_gS, +E_Z/2 + E_gS, -E_Z/2 + E_eS, +E_Z/2 + E_eS.
std::array<double, 4> level_energies(const ShiftSolution& shifts);

/// Solves the system for the target energies (E1, E2, E3, E4). The system is
/// overdetermined; throws PreconditionError unless E2 - E1 == E4 - E3 (to
/// 1e-12 relative).
ShiftSolution solve_level_shifts(const std::array<double, 4>& targets);

/// Targets (-E, -E/3, E/3, E): E_Z = E_eS = -E_gS = 2E/3.
ShiftSolution solve_level_shifts(double energy);

/// J'=1 <-> J''=1 six-level ring (the m'=0 <-> m''=0 transition is dipole
/// forbidden). Basis order: m'=-1, m''=0, m'=1, m''=1, m'=0, m''=-1.
/// Omega1 drives Delta m = +-1 links, Omega2 the same-m links; entries are
/// hbar Omega / 2 with the sign pattern of the Clebsch-Gordan coefficients.
struct SixLevelModel {
    cplx omega1;
    cplx omega2;
    ComplexMatrix h1;
};

SixLevelModel build_six_level(cplx omega1, cplx omega2);

inline constexpr std::array<std::string_view, 6> kOneToOneBasis = {"m'=-1", "m''=0", "m'=1",
                                                                   "m''=1",  "m'=0",  "m''=-1"};

}  // namespace circqft
