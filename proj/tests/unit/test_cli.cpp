#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "experiment/commands.hpp"
#include "experiment/config.hpp"

using namespace circqft::experiment;
namespace fs = std::filesystem;

namespace {

const char* kDemo = R"({
  "model": {"kind": "four_level", "E": 10.0, "V": [10.0, 3.3333333333333335]},
  "pulses": {"kind": "sech_masked", "T": 1.0, "tau": 1.0},
  "steps": 1000,
  "grid_points": 201,
  "qpe": {"phi": 0.75, "r": 2}
})";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("circqft_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(std::string_view cmd, const std::string& text, const fs::path& dir, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = kExitOk;
    try {
        code = run_command(cmd, parse_config_text(text), RunOptions{dir, true}, out, err);
    } catch (...) {
        code = report_current_exception(err);
    }
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("config rejects unknown keys with the key path") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"model": {"kind": "four_level", "Eo": 1}})"),
                         doctest::Contains("model.Eo"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"stepz": 10})"), doctest::Contains("stepz"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"pulses": {"T": -1}})"), doctest::Contains("pulses.T"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("{\n\"steps\": }"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"qpe": {"phi": 1.5}})"), ConfigError);
}

TEST_CASE("config accepts fractional phases and complex couplings") {
    const auto cfg = parse_config_text(R"({"model": {"kind": "four_level", "E": 2, "V": [2, 1]}, "qpe": {"phi": "1/3"}})");
    CHECK(cfg.qpe.phi == doctest::Approx(1.0 / 3.0));
    CHECK(cfg.model.coupling == circqft::cplx(2.0, 1.0));
    const auto scaled = with_energy_time(cfg, 20.0);
    CHECK(scaled.model.energy == doctest::Approx(20.0));
    CHECK(scaled.model.coupling.imag() == doctest::Approx(10.0));
}

TEST_CASE("identical configs give byte-identical CSV") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    for (auto cmd : {"eigentraj", "qpe", "adiabaticity"}) {
        REQUIRE(run(cmd, kDemo, a) == kExitOk);
        REQUIRE(run(cmd, kDemo, b) == kExitOk);
    }
    for (auto name : {"eigentraj.csv", "qpe_trace.csv", "qpe_distribution.csv", "adiabaticity.csv", "qpe.svg"}) {
        CAPTURE(name);
        CHECK(!slurp(a / name).empty());
        CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(slurp(a / "eigentraj.csv").rfind("t,eps_0,eps_1,eps_2,eps_3\n", 0) == 0);
    CHECK(slurp(a / "adiabaticity.csv").rfind("t,min_gap,max_coupling\n", 0) == 0);
    CHECK(slurp(a / "qpe_trace.csv").rfind("t,f,g,P\n", 0) == 0);
    const std::string meta = slurp(a / "qpe.meta.json");
    CHECK(meta.find("\"version\"") != std::string::npos);
    CHECK(meta.find("\"phi\": 0.75") != std::string::npos);
}

TEST_CASE("zero coupling gives E_j f(t) trajectories") {
    const auto dir = scratch("zero");
    const std::string cfg = R"({"model": {"kind": "custom", "H0": [-3, -1, 1, 3], "H1_first_column": [0, 0, 0, 0]},
                                "pulses": {"kind": "tanh", "T": 1},
                                "grid_points": 3})";
    REQUIRE(run("eigentraj", cfg, dir) == kExitOk);
    // Logistic pulses: f(0) = 1/2.
    CHECK(slurp(dir / "eigentraj.csv").find("\n0,-1.5,-0.5,0.5,1.5\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    std::string err;
    CHECK(run("eigentraj", R"({"model": {"kind": "custom", "H0": [1, 1, 2, 3], "H1_first_column": [0, 1, 0, 1]}})", dir,
              &err) == kExitPhysics);
    CHECK(err.find("non-degenerate") != std::string::npos);

    CHECK(run("models", R"({"model": {"kind": "six_level", "Omega1": 2, "Omega2": 1}})", dir, &err) == kExitPhysics);
    CHECK(err.find("modulus mismatch") != std::string::npos);

    CHECK(run("evolve", R"({"model": {"kind": "four_level"}, "bogus": 1})", dir, &err) == kExitConfig);
    CHECK(run("sweep", R"({"model": {"kind": "six_level", "Omega1": 1, "Omega2": 1, "H0": [1,2,3,4,5,6]}})", dir,
              &err) == kExitConfig);
    // Far too few steps for the exponential midpoint rule to hold the factorization.
    CHECK(run("evolve", R"({"model": {"kind": "four_level", "E": 10}, "steps": 2})", dir, &err) == kExitNumerical);
}

TEST_CASE("evolve on the demo model gives near-uniform moduli") {
    const auto dir = scratch("evolve");
    REQUIRE(run("evolve", kDemo, dir) == kExitOk);
    std::istringstream csv(slurp(dir / "propagator.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "row,col,modulus,phase");
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream cells(line);
        std::string j, k, mod;
        std::getline(cells, j, ',');
        std::getline(cells, k, ',');
        std::getline(cells, mod, ',');
        CHECK(std::stod(mod) == doctest::Approx(0.5).epsilon(0.05));
        ++rows;
    }
    CHECK(rows == 16);
}

TEST_CASE("sweep residual is nonincreasing") {
    const auto dir = scratch("sweep");
    const std::string cfg = R"({"model": {"kind": "four_level"}, "steps": 2000, "sweep": {"ET": [5, 10, 20, 40]}})";
    REQUIRE(run("sweep", cfg, dir) == kExitOk);
    CHECK(slurp(dir / "sweep.meta.json").find("\"residual_monotone\": true") != std::string::npos);
    CHECK(slurp(dir / "sweep.csv").rfind("ET,E,residual,final_fidelity,unitarity_drift\n", 0) == 0);
}

TEST_CASE("sampled qpe is reproducible for a fixed seed") {
    const auto a = scratch("shots_a"), b = scratch("shots_b");
    const std::string cfg = R"({"model": {"kind": "four_level"}, "steps": 1000, "qpe": {"phi": "1/3", "shots": 500, "seed": 11}})";
    REQUIRE(run("qpe", cfg, a) == kExitOk);
    REQUIRE(run("qpe", cfg, b) == kExitOk);
    const std::string dist = slurp(a / "qpe_distribution.csv");
    CHECK(dist.rfind("outcome,bits,basis_state,probability,ideal_probability,counts\n", 0) == 0);
    CHECK(dist == slurp(b / "qpe_distribution.csv"));
    CHECK(slurp(a / "qpe.meta.json").find("\"exact_expansion\": false") != std::string::npos);
}
