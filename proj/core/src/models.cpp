#include "circqft/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circqft/circulant.hpp"
#include "circqft/errors.hpp"

namespace circqft {

FourLevelModel build_four_level(double energy, cplx coupling) {
    if (!(energy > 0.0) || !std::isfinite(energy))
        throw PreconditionError("build_four_level: E must be positive and finite");
    if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
        throw PreconditionError("build_four_level: V must be finite");

    FourLevelModel model;
    model.energy = energy;
    model.coupling = coupling;
    const std::array<double, 4> diag = {-energy, -energy / 3.0, energy / 3.0, energy};
    model.h0 = ComplexMatrix::diagonal(diag);
    model.h1 = materialize(CirculantSpec({0.0, std::conj(coupling), 0.0, coupling}));

    if (coupling == cplx{}) {
        model.warnings.emplace_back("V = 0: circulant spectrum is entirely zero (fully degenerate)");
    } else {
        const auto lambda = hermitian_circulant_eigenvalues(CirculantSpec({0.0, std::conj(coupling), 0.0, coupling}));
        std::vector<double> sorted = lambda;
        std::sort(sorted.begin(), sorted.end());
        const double scale = std::abs(coupling);
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            if (sorted[i + 1] - sorted[i] <= kClusterGap * scale) {
                std::ostringstream os;
                os << "degenerate circulant spectrum: eigenvalue " << sorted[i]
                   << " repeats (real or imaginary V makes 2 Re(V i^n) coincide)";
                model.warnings.push_back(os.str());
                break;
            }
        }
    }
    return model;
}

std::array<double, 4> level_energies(const ShiftSolution& s) {
    return {-0.5 * s.zeeman + s.ground_stark, 0.5 * s.zeeman + s.ground_stark, -0.5 * s.zeeman + s.excited_stark,
            0.5 * s.zeeman + s.excited_stark};
}

ShiftSolution solve_level_shifts(const std::array<double, 4>& e) {
    for (double v : e) {
        if (!std::isfinite(v)) throw PreconditionError("solve_level_shifts: non-finite target");
    }
    const double lower_split = e[1] - e[0];
    const double upper_split = e[3] - e[2];
    const double scale = std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2]), std::abs(e[3])});
    if (std::abs(lower_split - upper_split) > 1e-12 * scale) {
        std::ostringstream os;
        os << "solve_level_shifts: one Zeeman splitting cannot give both " << lower_split << " and "
           << upper_split;
        throw PreconditionError(os.str());
    }
    ShiftSolution s;
    s.zeeman = lower_split;
    s.ground_stark = 0.5 * (e[0] + e[1]);
    s.excited_stark = 0.5 * (e[2] + e[3]);
    return s;
}

ShiftSolution solve_level_shifts(double energy) {
    if (!std::isfinite(energy)) throw PreconditionError("solve_level_shifts: E must be finite");
    // Closed form of the general solver for (-E, -E/3, E/3, E).
    const double two_thirds = 2.0 * energy / 3.0;
    return ShiftSolution{two_thirds, -two_thirds, two_thirds};
}

SixLevelModel build_six_level(cplx omega1, cplx omega2) {
    SixLevelModel model{omega1, omega2, ComplexMatrix(6)};
    auto& h = model.h1;
    const cplx a = 0.5 * omega1;
    const cplx b = 0.5 * omega2;
    const auto link = [&h](std::size_t row, std::size_t col, cplx value) {
        h(row, col) = value;
        h(col, row) = std::conj(value);
    };
    link(0, 1, -a);
    link(0, 5, -b);
    link(2, 1, a);
    link(2, 3, b);
    link(4, 3, -a);
    link(4, 5, a);
    return model;
}

}  // namespace circqft
