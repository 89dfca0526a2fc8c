#include "circqft/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "circqft/circulant.hpp"
#include "circqft/errors.hpp"

namespace circqft {

PulsePair PulsePair::tanh(double crossing_time) {
    if (!(crossing_time > 0.0) || !std::isfinite(crossing_time))
        throw PreconditionError("PulsePair: crossing time T must be positive");
    return PulsePair(PulseKind::Tanh, crossing_time, 0.0);
}

PulsePair PulsePair::sech_masked(double crossing_time, double mask_width) {
    if (!(crossing_time > 0.0) || !std::isfinite(crossing_time))
        throw PreconditionError("PulsePair: crossing time T must be positive");
    if (!(mask_width > 0.0) || !std::isfinite(mask_width))
        throw PreconditionError("PulsePair: mask width tau must be positive");
    return PulsePair(PulseKind::SechMasked, crossing_time, mask_width);
}

PulseValues PulsePair::operator()(double t) const {
    const double x = t / crossing_time_;
    // (1 - tanh x)/2 and (1 + tanh x)/2
    const double lower = 1.0 / (1.0 + std::exp(2.0 * x));
    const double upper = 1.0 / (1.0 + std::exp(-2.0 * x));
    if (kind_ == PulseKind::Tanh) return {lower, upper};
    const double mask = 1.0 / std::cosh(t / mask_width_);
    return {2.0 * mask * lower, 2.0 * mask * upper};
}

PulseValues evaluate_pulses(const PulsePair& pulses, double t) { return pulses(t); }

TimeWindow default_window(const PulsePair& pulses) {
    const double span = 6.0 * pulses.crossing_time();
    return {-span, span};
}

namespace {

void validate_pair(const ComplexMatrix& h0, const ComplexMatrix& h1) {
    const std::size_t n = h0.dim();
    if (n < 2) throw PreconditionError("Schedule: dimension must be at least 2");
    if (h1.dim() != n) throw PreconditionError("Schedule: H0 and H1 dimensions differ");
    if (!all_finite(h0) || !all_finite(h1)) throw PreconditionError("Schedule: non-finite entries");

    for (std::size_t i = 0; i < n; ++i) {
        if (h0(i, i).imag() != 0.0) throw PreconditionError("Schedule: H0 diagonal must be real");
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && h0(i, j) != cplx{}) throw PreconditionError("Schedule: H0 must be diagonal");
        }
    }
    std::vector<double> energies(n);
    for (std::size_t i = 0; i < n; ++i) energies[i] = h0(i, i).real();
    std::vector<double> sorted = energies;
    std::sort(sorted.begin(), sorted.end());
    double scale = 0.0;
    for (double e : sorted) scale = std::max(scale, std::abs(e));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (sorted[i + 1] - sorted[i] <= kClusterGap * scale) {
            std::ostringstream os;
            os << "Schedule: H0 energies must be non-degenerate; value " << sorted[i]
               << " appears more than once";
            throw DegeneracyError(os.str());
        }
    }

    if (!is_hermitian(h1)) throw PreconditionError("Schedule: H1 is not Hermitian");
    circulant_from_matrix(h1);  // throws when not circulant
}

}  // namespace

Schedule::Schedule(PulsePair pulses, ComplexMatrix h0, ComplexMatrix h1, Direction direction,
                   TimeWindow window, std::size_t steps)
    : pulses_(pulses),
      h0_(std::move(h0)),
      h1_(std::move(h1)),
      direction_(direction),
      window_(window),
      steps_(steps) {
    validate_pair(h0_, h1_);
    if (!std::isfinite(window_.start) || !std::isfinite(window_.stop) || !(window_.stop > window_.start))
        throw PreconditionError("Schedule: window must be a finite interval with start < stop");
    if (steps_ == 0) throw PreconditionError("Schedule: steps must be positive");
}

Schedule::Schedule(PulsePair pulses, ComplexMatrix h0, ComplexMatrix h1, Direction direction,
                   std::size_t steps)
    : Schedule(pulses, std::move(h0), std::move(h1), direction, default_window(pulses), steps) {}

std::vector<double> Schedule::grid() const { return uniform_grid(window_, steps_ + 1); }

ComplexMatrix Schedule::hamiltonian_at(double t) const {
    const auto [f, g] = pulses_(t);
    const double a0 = direction_ == Direction::Forward ? f : g;
    const double a1 = direction_ == Direction::Forward ? g : f;
    const std::size_t n = dim();
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = a0 * h0_(i, j) + a1 * h1_(i, j);
    return h;
}

Schedule Schedule::with_steps(std::size_t steps) const {
    Schedule copy = *this;
    if (steps == 0) throw PreconditionError("Schedule: steps must be positive");
    copy.steps_ = steps;
    return copy;
}

Schedule Schedule::with_direction(Direction direction) const {
    Schedule copy = *this;
    copy.direction_ = direction;
    return copy;
}

ComplexMatrix hamiltonian_at(const Schedule& schedule, double t) { return schedule.hamiltonian_at(t); }

std::vector<double> uniform_grid(const TimeWindow& window, std::size_t points) {
    if (points < 2) throw PreconditionError("uniform_grid: need at least two points");
    std::vector<double> out(points);
    const double h = window.length() / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = window.start + h * static_cast<double>(i);
    out.back() = window.stop;
    return out;
}

namespace {

void check_grid(const Schedule& schedule, std::span<const double> grid) {
    if (grid.empty()) throw PreconditionError("grid is empty");
    const auto& w = schedule.window();
    const double slack = 1e-12 * std::max(1.0, w.length());
    for (double t : grid) {
        if (!(t >= w.start - slack && t <= w.stop + slack)) {
            std::ostringstream os;
            os << "grid point " << t << " lies outside the schedule window [" << w.start << ", " << w.stop << "]";
            throw PreconditionError(os.str());
        }
    }
}

double smallest_gap(const std::vector<double>& sorted) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) gap = std::min(gap, sorted[i + 1] - sorted[i]);
    return gap;
}

}  // namespace

EigenTrajectory eigen_trajectories(const Schedule& schedule, std::span<const double> grid) {
    check_grid(schedule, grid);
    EigenTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.energies.reserve(grid.size());
    out.min_gap = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        auto eig = hermitian_eigen(schedule.hamiltonian_at(t));
        const double gap = smallest_gap(eig.values);
        if (gap < out.min_gap) {
            out.min_gap = gap;
            out.min_gap_time = t;
        }
        out.energies.push_back(std::move(eig.values));
    }
    return out;
}

AdiabaticityReport adiabaticity_report(const Schedule& schedule, std::span<const double> grid, double delta) {
    check_grid(schedule, grid);
    if (delta <= 0.0) delta = 1e-4 * schedule.pulses().crossing_time();
    const std::size_t n = schedule.dim();

    AdiabaticityReport out;
    out.heuristic_coupling_scale = 1.0 / schedule.pulses().crossing_time();
    out.overall_min_gap = std::numeric_limits<double>::infinity();
    out.margin = std::numeric_limits<double>::infinity();
    out.margin_time = std::numeric_limits<double>::quiet_NaN();

    for (double t : grid) {
        const ComplexMatrix h = schedule.hamiltonian_at(t);
        const auto centre = hermitian_eigen(h);
        const auto ahead = hermitian_eigen(schedule.hamiltonian_at(t + delta));
        const auto behind = hermitian_eigen(schedule.hamiltonian_at(t - delta));
        const double threshold = kClusterGap * frobenius_norm(h);

        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double gap = centre.values[k + 1] - centre.values[k];
            if (gap <= threshold) out.warnings.push_back({t, k, gap});
        }

        // Central difference with neighbours rotated into phase with chi_m(t).
        std::vector<ComplexVector> derivative(n);
        for (std::size_t m = 0; m < n; ++m) {
            const ComplexVector c = centre.vectors.column(m);
            ComplexVector a = ahead.vectors.column(m);
            ComplexVector b = behind.vectors.column(m);
            const cplx oa = inner(c, a);
            const cplx ob = inner(c, b);
            const cplx pa = std::abs(oa) > 0.0 ? std::conj(oa) / std::abs(oa) : cplx(1.0);
            const cplx pb = std::abs(ob) > 0.0 ? std::conj(ob) / std::abs(ob) : cplx(1.0);
            derivative[m].resize(n);
            for (std::size_t r = 0; r < n; ++r) derivative[m][r] = (pa * a[r] - pb * b[r]) / (2.0 * delta);
        }

        double gap_here = std::numeric_limits<double>::infinity();
        double coupling_here = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t k = 0; k < n; ++k) {
                if (m == k) continue;
                const double gap = std::abs(centre.values[m] - centre.values[k]);
                gap_here = std::min(gap_here, gap);
                if (gap <= threshold) continue;  // coupling undefined inside a cluster
                const double coupling = std::abs(inner(derivative[m], centre.vectors.column(k)));
                coupling_here = std::max(coupling_here, coupling);
                if (coupling > 0.0 && gap / coupling < out.margin) {
                    out.margin = gap / coupling;
                    out.margin_time = t;
                }
            }
        }

        out.times.push_back(t);
        out.min_gap.push_back(gap_here);
        out.max_coupling.push_back(coupling_here);
        out.overall_min_gap = std::min(out.overall_min_gap, gap_here);
        out.overall_max_coupling = std::max(out.overall_max_coupling, coupling_here);
    }
    return out;
}

}  // namespace circqft
