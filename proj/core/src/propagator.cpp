#include "circqft/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "circqft/circulant.hpp"
#include "circqft/errors.hpp"

namespace circqft {

bool is_permutation(const Permutation& perm) {
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t v : perm) {
        if (v >= perm.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation invert(const Permutation& perm) {
    if (!is_permutation(perm)) throw PreconditionError("invert: not a permutation");
    Permutation out(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = i;
    return out;
}

Permutation identity_permutation(std::size_t n) {
    Permutation out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

namespace {

void require_window(const TimeWindow& window, std::size_t steps) {
    if (steps == 0) throw PreconditionError("evolve: steps must be positive");
    if (!std::isfinite(window.start) || !std::isfinite(window.stop) || !(window.stop > window.start))
        throw PreconditionError("evolve: window must satisfy start < stop");
}

ComplexMatrix midpoint_step(const HamiltonianFn& hamiltonian, double t_mid, double dt) {
    return unitary_exp(hamiltonian(t_mid), dt);
}

}  // namespace

ComplexMatrix propagate(const HamiltonianFn& hamiltonian, const TimeWindow& window, std::size_t steps) {
    require_window(window, steps);
    const double dt = window.length() / static_cast<double>(steps);
    ComplexMatrix u;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t_mid = window.start + (static_cast<double>(k) + 0.5) * dt;
        ComplexMatrix step = midpoint_step(hamiltonian, t_mid, dt);
        u = u.empty() ? std::move(step) : step * u;
    }
    if (!all_finite(u)) throw IntegrationError("evolve: propagator has non-finite entries");
    return u;
}

EvolutionResult evolve(const HamiltonianFn& hamiltonian, const TimeWindow& window, std::size_t steps,
                       const EvolutionOptions& options) {
    require_window(window, steps);
    const double dt = window.length() / static_cast<double>(steps);
    const ComplexMatrix h_start = hamiltonian(window.start);
    const std::size_t n = h_start.dim();

    EvolutionResult out;
    ComplexMatrix u = ComplexMatrix::identity(n);
    out.times.push_back(window.start);
    out.samples.push_back(u);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t_mid = window.start + (static_cast<double>(k) + 0.5) * dt;
        u = midpoint_step(hamiltonian, t_mid, dt) * u;
        if (!all_finite(u)) {
            std::ostringstream os;
            os << "evolve: non-finite propagator entries at t = " << t_mid + 0.5 * dt;
            throw IntegrationError(os.str());
        }
        const bool last = k + 1 == steps;
        const bool sample = options.sample_stride != 0 && (k + 1) % options.sample_stride == 0;
        if (sample || last) {
            out.times.push_back(last ? window.stop : window.start + static_cast<double>(k + 1) * dt);
            out.samples.push_back(u);
            out.unitarity_drift = std::max(out.unitarity_drift, unitarity_deviation(u));
        }
    }
    if (out.unitarity_drift > kUnitarityTolerance) {
        std::ostringstream os;
        os << "evolve: unitarity drift " << out.unitarity_drift << " exceeds " << kUnitarityTolerance;
        throw IntegrationError(os.str());
    }
    out.final = u;
    if (options.estimate_convergence) {
        const ComplexMatrix refined = propagate(hamiltonian, window, 2 * steps);
        out.convergence_estimate = frobenius_norm(out.final - refined);
    }
    return out;
}

EvolutionResult evolve(const Schedule& schedule, const EvolutionOptions& options) {
    return evolve([&schedule](double t) { return schedule.hamiltonian_at(t); }, schedule.window(),
                  schedule.steps(), options);
}

ComplexMatrix phased_dft(const Permutation& sigma, std::span<const double> alpha, Direction direction) {
    const std::size_t n = sigma.size();
    if (!is_permutation(sigma)) throw PreconditionError("phased_dft: sigma is not a bijection");
    if (alpha.size() != n) throw PreconditionError("phased_dft: alpha has the wrong length");
    const ComplexMatrix f = dft_matrix(n);
    ComplexMatrix out(n);
    if (direction == Direction::Forward) {
        for (std::size_t col = 0; col < n; ++col) {
            const cplx phase = std::polar(1.0, alpha[col]);
            for (std::size_t row = 0; row < n; ++row) out(row, col) = phase * f(row, sigma[col]);
        }
    } else {
        // Row sigma(m) is e^{-i alpha_m} times the conjugate of DFT column m.
        for (std::size_t m = 0; m < n; ++m) {
            const cplx phase = std::polar(1.0, -alpha[m]);
            for (std::size_t col = 0; col < n; ++col) out(sigma[m], col) = phase * std::conj(f(col, m));
        }
    }
    return out;
}

PhasedDftFactorization factor_phased_dft(const ComplexMatrix& u, Direction direction) {
    const std::size_t n = u.dim();
    if (n < 2) throw PreconditionError("factor_phased_dft: dimension must be at least 2");
    if (unitarity_deviation(u) > kUnitarityTolerance)
        throw PreconditionError("factor_phased_dft: input is not unitary to 1e-8");

    const ComplexMatrix f = dft_matrix(n);
    // Forward: overlaps(m, n) = <F_m|U|n>. Inverse: overlaps(k, n) = <k|U|F_n>.
    const ComplexMatrix overlaps = direction == Direction::Forward ? adjoint(f) * u : u * f;

    PhasedDftFactorization out;
    out.sigma.resize(n);
    out.alpha.resize(n);
    std::vector<std::size_t> owner(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = 0;
        std::size_t second = n;
        for (std::size_t row = 1; row < n; ++row) {
            if (std::abs(overlaps(row, col)) > std::abs(overlaps(best, col))) {
                second = best;
                best = row;
            } else if (second == n || std::abs(overlaps(row, col)) > std::abs(overlaps(second, col))) {
                second = row;
            }
        }
        const double top = std::abs(overlaps(best, col));
        const double runner_up = std::abs(overlaps(second, col));
        if (top - runner_up <= 1e-3) {
            std::ostringstream os;
            os << "factor_phased_dft: column " << col << " overlaps targets " << best << " and " << second
               << " almost equally (" << top << " vs " << runner_up << ")";
            throw AmbiguityError(os.str());
        }
        if (owner[best] != n) {
            std::ostringstream os;
            os << "factor_phased_dft: columns " << owner[best] << " and " << col << " both map to target "
               << best;
            throw AmbiguityError(os.str());
        }
        owner[best] = col;
        out.sigma[col] = best;
        const double phase = std::arg(overlaps(best, col));
        out.alpha[col] = direction == Direction::Forward ? phase : wrap_phase(-phase);
    }
    out.residual = frobenius_norm(u - phased_dft(out.sigma, out.alpha, direction));
    return out;
}

namespace {

std::vector<std::size_t> ascending_ranks(std::span<const double> values, const char* what) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (values[order[i + 1]] - values[order[i]] <= kClusterGap * scale) {
            std::ostringstream os;
            os << "predict_permutation: " << what << " spectrum is degenerate (entries " << order[i] << " and "
               << order[i + 1] << ")";
            throw DegeneracyError(os.str());
        }
    }
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
    return rank;
}

std::vector<double> diagonal_of(const ComplexMatrix& m) {
    std::vector<double> d(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) d[i] = m(i, i).real();
    return d;
}

}  // namespace

Permutation predict_permutation(const ComplexMatrix& h0, const ComplexMatrix& h1) {
    const std::size_t n = h0.dim();
    if (h1.dim() != n) throw PreconditionError("predict_permutation: dimension mismatch");
    const auto start_rank = ascending_ranks(diagonal_of(h0), "H0");
    const auto lambda = hermitian_circulant_eigenvalues(circulant_from_matrix(h1));
    const auto end_rank = ascending_ranks(lambda, "circulant");

    std::vector<std::size_t> by_rank(n);
    for (std::size_t m = 0; m < n; ++m) by_rank[end_rank[m]] = m;
    Permutation sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = by_rank[start_rank[j]];
    return sigma;
}

std::vector<double> branch_phase_integrals(const HamiltonianFn& hamiltonian, std::span<const double> grid) {
    if (grid.size() < 2) throw PreconditionError("branch_phase_integrals: need at least two grid points");
    std::vector<double> integral;
    std::vector<double> previous;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ComplexMatrix h = hamiltonian(grid[i]);
        auto eig = hermitian_eigen(h);
        const double threshold = kClusterGap * frobenius_norm(h);
        if (threshold > 0.0) {
            for (std::size_t k = 0; k + 1 < eig.values.size(); ++k) {
                if (eig.values[k + 1] - eig.values[k] <= threshold) {
                    std::ostringstream os;
                    os << "branch tracking failed: eigenvalues " << k << " and " << k + 1
                       << " are degenerate at t = " << grid[i];
                    throw DegeneracyError(os.str(), grid[i]);
                }
            }
        }
        if (i == 0) {
            integral.assign(eig.values.size(), 0.0);
        } else {
            const double dt = grid[i] - grid[i - 1];
            for (std::size_t k = 0; k < integral.size(); ++k)
                integral[k] += 0.5 * dt * (previous[k] + eig.values[k]);
        }
        previous = std::move(eig.values);
    }
    return integral;
}

namespace {

// branch_of[entry] = eigenvalue rank followed by the output entry.
std::vector<std::size_t> branch_assignment(const Schedule& schedule) {
    if (schedule.direction() == Direction::Forward) return ascending_ranks(diagonal_of(schedule.h0()), "H0");
    const auto lambda = hermitian_circulant_eigenvalues(circulant_from_matrix(schedule.h1()));
    return ascending_ranks(lambda, "circulant");
}

}  // namespace

std::vector<double> dynamical_phase_prediction(const Schedule& schedule) {
    const auto grid = schedule.grid();
    const auto integrals =
        branch_phase_integrals([&schedule](double t) { return schedule.hamiltonian_at(t); }, grid);
    const auto branch = branch_assignment(schedule);
    const double sign = schedule.direction() == Direction::Forward ? -1.0 : 1.0;
    std::vector<double> alpha(branch.size());
    for (std::size_t j = 0; j < branch.size(); ++j) alpha[j] = wrap_phase(sign * integrals[branch[j]]);
    return alpha;
}

AdiabaticPhasePrediction adiabatic_phase_prediction(const Schedule& schedule) {
    const std::size_t n = schedule.dim();
    const bool forward = schedule.direction() == Direction::Forward;
    const Permutation sigma = predict_permutation(schedule.h0(), schedule.h1());
    const Permutation sigma_inv = invert(sigma);
    const ComplexMatrix f = dft_matrix(n);
    const auto branch = branch_assignment(schedule);

    // Running product of <chi(t_{k+1})|chi(t_k)> per rank branch.
    const auto grid = schedule.grid();
    std::vector<cplx> transport(n, cplx(1.0));
    EigenDecomposition first;
    EigenDecomposition previous;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto eig = hermitian_eigen(schedule.hamiltonian_at(grid[i]));
        if (i == 0) {
            first = eig;
        } else {
            for (std::size_t r = 0; r < n; ++r)
                transport[r] *= inner(eig.vectors.column(r), previous.vectors.column(r));
        }
        previous = std::move(eig);
    }

    AdiabaticPhasePrediction out;
    out.dynamical = dynamical_phase_prediction(schedule);
    out.geometric.resize(n);
    out.total.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = branch[j];
        ComplexVector start(n, cplx{});
        ComplexVector end(n, cplx{});
        if (forward) {
            start[j] = 1.0;
            end = f.column(sigma[j]);
        } else {
            start = f.column(j);
            end[sigma_inv[j]] = 1.0;
        }
        const cplx loop = inner(end, previous.vectors.column(r)) * transport[r] * inner(first.vectors.column(r), start);
        const double gamma = std::arg(loop);
        out.geometric[j] = forward ? gamma : wrap_phase(-gamma);
        out.total[j] = wrap_phase(out.dynamical[j] + out.geometric[j]);
    }
    return out;
}

}  // namespace circqft
