#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "kemosim/config.hpp"
#include "kemosim/errors.hpp"
#include "kemosim/io.hpp"
#include "support.hpp"

using namespace kemosim;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[family]
kind = "singular"
chi = 0.5

[model]
lengths = [8.0, 8.0]
cells = [64, 64]
)";

// Every message of the ConfigError thrown by parsing `text`.
std::vector<std::string> violations_of(const std::string& text, const fs::path& base = {}) {
    try {
        parse_config_string(text, base);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
    return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config fills defaults") {
    const auto cfg = parse_config_string(kMinimal);
    CHECK(std::get<SingularMotility>(cfg.family).chi == 0.5);
    CHECK(cfg.model.d == 1.0);
    CHECK(cfg.model.n_dim == 2);
    CHECK(cfg.cells == std::vector<int>{64, 64});
    CHECK(cfg.initial.kind == InitialSpec::Kind::Gaussian);
    CHECK(cfg.initial.baseline_v == 1.0);
    CHECK(cfg.step == StepControl{});
    CHECK_FALSE(cfg.p.has_value());
    CHECK(cfg.grid().size() == 64 * 64);
}

TEST_CASE("alpha outside (0, 1) is rejected with a named constraint") {
    const auto v = violations_of(R"(
[family]
kind = "algebraic"
sigma = 1.0
lambda = 1.0
alpha = 1.2
[model]
lengths = [1.0]
cells = [16]
)");
    REQUIRE_FALSE(v.empty());
    CHECK(mentions(v, "alpha"));
    CHECK(mentions(v, "(0, 1)"));
}

TEST_CASE("singular family with a zero v0 is rejected") {
    auto v = violations_of(std::string(kMinimal) + "[initial]\nbaseline_v = 0.0\n");
    CHECK(mentions(v, "v = 0"));

    // from a snapshot file with one zero cell
    const auto dir = fs::temp_directory_path() / "kemosim_test_config";
    fs::create_directories(dir);
    const Grid g({1.0}, {8});
    ScalarField v0(g, 1.0);
    v0.at(5) = 0.0;
    write_snapshot(dir / "init.csv", State{ScalarField(g, 1.0), v0, 0.0});
    v = violations_of(R"(
[family]
kind = "singular"
chi = 0.5
[model]
lengths = [1.0]
cells = [8]
[initial]
kind = "file"
path = "init.csv"
)",
                      dir);
    CHECK(mentions(v, "zero cell"));
}

TEST_CASE("every violation is reported at once") {
    const auto v = violations_of(R"(
[family]
kind = "singular"
chi = -1.0
sigma = 3.0
[model]
d = -2.0
lengths = [1.0]
cells = [2]
[step]
cfl_safety = 2.0
[run]
horizon = -1.0
bogus = 1
[nonsense]
x = 1
)");
    CHECK(mentions(v, "chi"));
    CHECK(mentions(v, "family.sigma"));
    CHECK(mentions(v, "model.d"));
    CHECK(mentions(v, "model.cells"));
    CHECK(mentions(v, "cfl_safety"));
    CHECK(mentions(v, "run.horizon"));
    CHECK(mentions(v, "run.bogus"));
    CHECK(mentions(v, "[nonsense]"));
    CHECK(v.size() >= 8);
}

TEST_CASE("type errors and syntax errors") {
    CHECK(mentions(violations_of(std::string(kMinimal) + "[run]\nhorizon = \"long\"\n"), "expected a number"));
    CHECK(mentions(violations_of("[family\nkind = 1"), "TOML syntax error"));
    CHECK(mentions(violations_of("[model]\nlengths=[1.0]\ncells=[8]\n"), "[family]"));
    CHECK(mentions(violations_of(std::string(kMinimal) + "[exponents]\np = 1.5\n"), "both p and q"));
    CHECK_THROWS_AS(parse_config("/nonexistent/kemosim.toml"), ConfigError);
}

TEST_CASE("round trip through to_toml") {
    SUBCASE("singular") {
        const auto cfg = parse_config_string(std::string(kMinimal) + "[exponents]\np = 1.3\nq = 0.1\n[output]\nsnapshots_every = 2.5\n");
        CHECK(parse_config_string(to_toml(cfg)) == cfg);
    }
    SUBCASE("algebraic with eta and custom audit range") {
        const auto cfg = parse_config_string(R"(
[family]
kind = "algebraic"
sigma = 0.3
lambda = 2.7
alpha = 0.1
eta = 0.05
[model]
d = 0.7
n_dim = 3
lengths = [2.0]
cells = [40]
[initial]
kind = "random"
amplitude = 0.25
[run]
horizon = 1.5
lp = [1.5, 3.0]
seed = 99
[audit]
v_min = 0.01
v_max = 1e4
grid_points = 128
)");
        CHECK(parse_config_string(to_toml(cfg)) == cfg);
    }
    SUBCASE("custom table") {
        const auto cfg = parse_config_string(R"(
[family]
kind = "custom"
v_table = [0.5, 1.0, 2.0]
gamma_table = [1.0, 0.5, 0.25]
phi_table = [0.1, 0.2, 0.3]
[model]
lengths = [1.0, 2.0]
cells = [8, 16]
)");
        CHECK(parse_config_string(to_toml(cfg)) == cfg);
    }
}

TEST_CASE("initial data") {
    SUBCASE("gaussian bump plus baseline") {
        const auto cfg = parse_config_string(std::string(kMinimal) + "[initial]\namplitude = 2.0\nwidth = 0.5\n");
        const auto s = make_initial_state(cfg);
        CHECK(s.u.max() <= 3.0);
        CHECK(s.u.max() > 2.9);
        CHECK(s.u.min() >= 1.0);
        CHECK(s.v.min() == 1.0);
        CHECK(s.v.max() == 1.0);
        // symmetric about the centre
        const auto& g = s.u.grid;
        CHECK(s.u.at(3, 10) == s.u.at(g.cells(0) - 4, 10));
    }
    SUBCASE("random data depends on the seed only") {
        auto cfg = parse_config_string(std::string(kMinimal) + "[initial]\nkind = \"random\"\n");
        const auto a = make_initial_state(cfg), b = make_initial_state(cfg);
        CHECK(a.u.values == b.u.values);
        cfg.seed = 7;
        CHECK(make_initial_state(cfg).u.values != a.u.values);
    }
    SUBCASE("constant") {
        const auto cfg = parse_config_string(std::string(kMinimal) + "[initial]\nkind = \"constant\"\nbaseline_u = 2.0\n");
        const auto s = make_initial_state(cfg);
        CHECK(s.u.min() == 2.0);
        CHECK(s.u.max() == 2.0);
    }
}

}  // TEST_SUITE
