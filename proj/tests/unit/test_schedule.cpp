#include <doctest.h>

#include <cmath>
#include <limits>

#include "circqft/errors.hpp"
#include "circqft/models.hpp"
#include "circqft/schedule.hpp"
#include "support/oracles.hpp"

using namespace circqft;

namespace {

Schedule demo_schedule(double energy, Direction direction = Direction::Forward, std::size_t steps = 4000) {
    const auto model = build_four_level(energy, energy * cplx(1.0, 1.0 / 3.0));
    return Schedule(PulsePair::sech_masked(1.0, 1.0), model.h0, model.h1, direction, steps);
}

}  // namespace

TEST_CASE("pulse values at the crossing point") {
    const auto tanh_pair = evaluate_pulses(PulsePair::tanh(2.0), 0.0);
    CHECK(tanh_pair.f == 0.5);
    CHECK(tanh_pair.g == 0.5);
    for (double T : {0.5, 1.0, 3.0}) {
        for (double tau : {0.2, 1.0, 7.0}) {
            const auto masked = evaluate_pulses(PulsePair::sech_masked(T, tau), 0.0);
            CHECK(masked.f == 1.0);
            CHECK(masked.g == 1.0);
        }
    }
}

TEST_CASE("g/f equals e^{2t/T} for both pulse kinds") {
    const auto at3 = evaluate_pulses(PulsePair::tanh(1.5), 4.5);
    CHECK(at3.g / at3.f == doctest::Approx(std::exp(6.0)).epsilon(1e-13));
    CHECK(at3.g / at3.f == doctest::Approx(403.4287934927351).epsilon(1e-12));
    for (const auto& p : {PulsePair::tanh(1.3), PulsePair::sech_masked(1.3, 0.7)}) {
        double previous = 0.0;
        for (double t = -8.0; t <= 8.0; t += 0.25) {
            const auto v = p(t);
            const double ratio = v.g / v.f;
            CHECK(ratio == doctest::Approx(std::exp(2.0 * t / 1.3)).epsilon(1e-12));
            CHECK(ratio > previous);
            previous = ratio;
        }
    }
}

TEST_CASE("tanh pair sums to one") {
    const auto p = PulsePair::tanh(0.8);
    for (double t = -20.0; t <= 20.0; t += 0.125) {
        const auto v = p(t);
        CHECK(std::abs(v.f + v.g - 1.0) <= 2.0 * std::numeric_limits<double>::epsilon());
    }
}

TEST_CASE("pulse parameters must be positive") {
    CHECK_THROWS_AS(PulsePair::tanh(0.0), PreconditionError);
    CHECK_THROWS_AS(PulsePair::tanh(-1.0), PreconditionError);
    CHECK_THROWS_AS(PulsePair::sech_masked(1.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(PulsePair::sech_masked(-2.0, 1.0), PreconditionError);
}

TEST_CASE("Schedule validates H0 and H1") {
    const auto model = build_four_level(1.0, cplx(1.0, 1.0 / 3.0));
    const auto pulses = PulsePair::tanh(1.0);
    SUBCASE("equal diagonal energies") {
        const std::vector<double> degenerate = {-1.0, 0.5, 0.5, 1.0};
        CHECK_THROWS_AS(Schedule(pulses, ComplexMatrix::diagonal(degenerate), model.h1, Direction::Forward),
                        DegeneracyError);
    }
    SUBCASE("off-diagonal H0") {
        ComplexMatrix h0 = model.h0;
        h0(0, 1) = 0.1;
        h0(1, 0) = 0.1;
        CHECK_THROWS_AS(Schedule(pulses, h0, model.h1, Direction::Forward), PreconditionError);
    }
    SUBCASE("non-circulant H1") {
        ComplexMatrix h1 = model.h1;
        h1(0, 2) = 0.2;
        h1(2, 0) = 0.2;
        CHECK_THROWS_AS(Schedule(pulses, model.h0, h1, Direction::Forward), PreconditionError);
    }
    SUBCASE("bad window and steps") {
        CHECK_THROWS_AS(Schedule(pulses, model.h0, model.h1, Direction::Forward, TimeWindow{1.0, 1.0}),
                        PreconditionError);
        CHECK_THROWS_AS(Schedule(pulses, model.h0, model.h1, Direction::Forward, std::size_t{0}), PreconditionError);
    }
    SUBCASE("default window is six crossing times") {
        const Schedule s(PulsePair::tanh(2.0), model.h0, model.h1, Direction::Forward);
        CHECK(s.window().start == -12.0);
        CHECK(s.window().stop == 12.0);
        CHECK(s.grid().size() == kDefaultSteps + 1);
    }
}

TEST_CASE("hamiltonian_at asymptotics and direction") {
    const auto model = build_four_level(1.0, cplx(1.0, 1.0 / 3.0));
    const Schedule fwd(PulsePair::tanh(1.0), model.h0, model.h1, Direction::Forward);
    const Schedule inv = fwd.with_direction(Direction::Inverse);

    SUBCASE("inverse at t = 0 is the average") {
        CHECK(max_abs_entry(inv.hamiltonian_at(0.0) - 0.5 * (model.h0 + model.h1)) < 1e-16);
    }
    SUBCASE("forward ends") {
        for (double t : {-6.0, 6.0}) {
            const auto [f, g] = fwd.pulses()(t);
            const ComplexMatrix h = fwd.hamiltonian_at(t);
            CHECK(is_hermitian(h));
            const ComplexMatrix dominant = t < 0 ? f * model.h0 : g * model.h1;
            const double bound = t < 0 ? g / f * frobenius_norm(model.h1) / frobenius_norm(model.h0)
                                       : f / g * frobenius_norm(model.h0) / frobenius_norm(model.h1);
            CHECK(frobenius_norm(h - dominant) <= bound * frobenius_norm(dominant) * (1.0 + 1e-12));
        }
    }
    SUBCASE("forward at t equals inverse at -t for tanh pulses, exactly") {
        for (double t = -6.0; t <= 6.0; t += 0.37) CHECK(fwd.hamiltonian_at(t) == inv.hamiltonian_at(-t));
    }
}

TEST_CASE("eigen_trajectories reproduce the asymptotic spectra") {
    const double e = 1.0;
    const Schedule s = demo_schedule(e);
    const std::vector<double> probe = {-4.0, 4.0};
    const auto traj = eigen_trajectories(s, probe);

    const auto [f, g_left] = s.pulses()(-4.0);
    const double left[4] = {-e, -e / 3.0, e / 3.0, e};
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(traj.energies[0][k] - f * left[k]) <= 0.01 * std::abs(f * left[k]));

    const auto [f_right, g] = s.pulses()(4.0);
    const double right[4] = {-2.0 * e, -2.0 * e / 3.0, 2.0 * e / 3.0, 2.0 * e};
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(traj.energies[1][k] - g * right[k]) <= 0.01 * std::abs(g * right[k]));
}

TEST_CASE("eigen_trajectories: no crossings and continuity under refinement") {
    const Schedule s = demo_schedule(1.0);
    const auto coarse = eigen_trajectories(s, uniform_grid({-4.0, 4.0}, 201));
    CHECK(coarse.min_gap > 0.0);

    auto max_jump = [](const EigenTrajectory& t) {
        double jump = 0.0;
        for (std::size_t i = 1; i < t.times.size(); ++i)
            for (std::size_t k = 0; k < t.energies[i].size(); ++k)
                jump = std::max(jump, std::abs(t.energies[i][k] - t.energies[i - 1][k]));
        return jump;
    };
    const auto fine = eigen_trajectories(s, uniform_grid({-4.0, 4.0}, 401));
    CHECK(max_jump(fine) <= 0.5 * max_jump(coarse) * 1.05);
}

TEST_CASE("eigen_trajectories with H1 = 0 follow E_j f(t)") {
    const auto model = build_four_level(2.0, cplx(1.0, 0.5));
    const Schedule s(PulsePair::sech_masked(1.0, 1.0), model.h0, ComplexMatrix(4), Direction::Forward);
    const auto traj = eigen_trajectories(s, uniform_grid(s.window(), 50));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double f = s.pulses()(traj.times[i]).f;
        for (std::size_t k = 0; k < 4; ++k) CHECK(traj.energies[i][k] == model.h0(k, k).real() * f);
    }
}

TEST_CASE("eigen_trajectories rejects grid points outside the window") {
    const Schedule s = demo_schedule(1.0);
    const std::vector<double> bad = {0.0, 7.0};
    CHECK_THROWS_AS(eigen_trajectories(s, bad), PreconditionError);
}

TEST_CASE("adiabaticity_report with H1 = 0 sees no coupling") {
    const auto model = build_four_level(1.0, cplx(1.0, 0.5));
    const Schedule s(PulsePair::tanh(1.0), model.h0, ComplexMatrix(4), Direction::Forward);
    const auto report = adiabaticity_report(s, uniform_grid(s.window(), 41));
    CHECK(report.overall_max_coupling == 0.0);
    CHECK(std::isinf(report.margin));
    CHECK(report.heuristic_coupling_scale == 1.0);
}

TEST_CASE("adiabaticity_report matches the Hellmann-Feynman oracle") {
    const Schedule s = demo_schedule(10.0);
    const auto grid = uniform_grid(s.window(), 241);
    const auto report = adiabaticity_report(s, grid);
    const auto oracle = oracle::hellmann_feynman(s, grid);
    CHECK(report.overall_max_coupling == doctest::Approx(oracle.max_coupling).epsilon(1e-5));
    CHECK(report.margin == doctest::Approx(oracle.margin).epsilon(1e-5));
    CHECK(report.warnings.empty());
}

TEST_CASE("adiabaticity margin separates the adiabatic and diabatic regimes") {
    const auto fine = [](const Schedule& s) { return uniform_grid(s.window(), 2001); };
    const Schedule strong = demo_schedule(10.0);
    const Schedule weak = demo_schedule(0.1);
    const auto strong_report = adiabaticity_report(strong, fine(strong));
    const auto weak_report = adiabaticity_report(weak, fine(weak));
    CHECK(strong_report.margin > 10.0);
    CHECK(weak_report.margin < 1.0);
    CHECK(strong_report.overall_min_gap > 0.0);
}

TEST_CASE("adiabaticity_report warns on degenerate clusters") {
    // Real V makes lambda_1 = lambda_3 = 0 on the circulant side.
    const auto model = build_four_level(1.0, cplx(1.0, 0.0));
    const Schedule s(PulsePair::tanh(1.0), model.h0, model.h1, Direction::Forward, TimeWindow{-6.0, 60.0}, 10);
    const std::vector<double> late = {60.0};
    const auto report = adiabaticity_report(s, late);
    REQUIRE_FALSE(report.warnings.empty());
    CHECK(report.warnings.front().time == 60.0);
}
