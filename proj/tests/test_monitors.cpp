#include <doctest.h>

#include <cmath>

#include "kemosim/errors.hpp"
#include "kemosim/monitors.hpp"
#include "kemosim/stepper.hpp"
#include "support.hpp"

using namespace kemosim;
using kemosim::testing::field_from;
using kemosim::testing::Gen;
using kemosim::testing::kPi;

namespace {

const Grid kUnit({1.0, 1.0}, {8, 8});

State constant_state(double u, double v, double t = 0.0) {
    return State{ScalarField(kUnit, u), ScalarField(kUnit, v), t};
}

// Two states of a smooth run separated by `gap`, on an n x n grid of [0, 2]^2,
// with v scaled by `v_scale`.
std::pair<State, State> smooth_pair(int n, double gap, const MotilityFamily& fam, const ModelParams& p,
                                    double v_scale = 1.0) {
    const Grid g({2.0, 2.0}, {n, n});
    State s = kemosim::testing::smooth_state(g, 0.4);
    for (double& x : s.v.values) x *= v_scale;
    StepControl ctrl;
    ctrl.dt_max = 1e-3 * 32.0 / n;
    s = run(s, fam, p, ctrl, 0.1).final_state;
    State s2 = run(s, fam, p, ctrl, s.t + gap).final_state;
    return {s, s2};
}

}  // namespace

TEST_SUITE("monitors") {

TEST_CASE("weighted_functional examples") {
    CHECK(weighted_functional(constant_state(1.0, 1.0), 1.7, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weighted_functional(constant_state(2.0, 1.0), 2.0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(weighted_functional(constant_state(1.0, 4.0), 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    State bad = constant_state(1.0, 1.0);
    bad.v.at(2, 3) = 0.0;
    CHECK_THROWS_AS(weighted_functional(bad, 2.0, 0.5), DomainError);
}

TEST_CASE("power_integral against an analytic integral") {
    // int_0^1 (1 + x) dx with u = 1 + x, v = 1
    const Grid g({1.0}, {1000});
    const auto u = field_from(g, [](double x, double) { return 1.0 + x; });
    CHECK(power_integral(u, ScalarField(g, 1.0), 1.0, -3.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(power_integral(u, ScalarField(g, 2.0), 2.0, 1.0) == doctest::Approx(2.0 * 7.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("inequality residual") {
    const auto s = constant_state(1.0, 1.0, 1.0);
    CHECK(inequality_residual(0.0, 1.0, s, 1.25, 0.1) == 0.0);
    CHECK_THROWS_AS(inequality_residual(1.0, 1.0, s, 1.25, 0.1), DomainError);

    // by hand: W jumps from 1 to 4 over dt = 0.5 with u = 2, v = 1, p = 2, q = 1
    const auto s2 = constant_state(2.0, 1.0, 0.5);
    const double expected = (4.0 - 1.0) / 0.5 - (1.0 * 4.0 - 1.0 * 8.0);
    CHECK(inequality_residual(0.0, 1.0, s2, 2.0, 1.0) == doctest::Approx(expected));
}

TEST_CASE("heat limit: inequality residual stays below tolerance on a smooth run") {
    const MotilityFamily fam = ConstantMotility{1.0, 0.0};
    const ModelParams p{1.0, 2, {2.0, 2.0}};
    const Grid g({2.0, 2.0}, {32, 32});
    const auto s0 = kemosim::testing::smooth_state(g, 0.4);
    Monitor mon(fam, p, MonitorConfig{{2.0}, 1.25, 0.05});
    const double sample_dt = 0.05;
    run(s0, fam, p, StepControl{}, 2.0, sample_dt, [&](const State& st) { mon.observe(st); });
    double wmax = 0.0;
    for (const auto& r : mon.records()) wmax = std::max(wmax, r.W);
    const double tol = 10.0 * (g.spacing(0) * g.spacing(0) + sample_dt) * wmax;
    for (const auto& r : mon.records()) CHECK(r.ineq_residual <= tol);
}

TEST_CASE("identity residual: steady state is exactly zero") {
    const auto a = constant_state(1.3, 1.3, 0.0);
    const auto b = constant_state(1.3, 1.3, 0.5);
    for (double pt : {1.0, 1.5, 3.0})
        for (double qt : {-2.0, -0.5, 0.0, 1.0}) CHECK(identity_residual(a, b, pt, qt, SingularMotility{0.5}, ModelParams{}) == 0.0);
}

TEST_CASE("identity residual: exponents (1, 0) reduce to mass conservation") {
    const ModelParams p{1.0, 2, {2.0, 2.0}};
    const auto [a, b] = smooth_pair(16, 0.05, SingularMotility{0.5}, p);
    CHECK(std::abs(identity_residual(a, b, 1.0, 0.0, SingularMotility{0.5}, p)) <= 1e-12);
}

TEST_CASE("identity residual converges under joint refinement; the swapped exponent does not") {
    const MotilityFamily fam = SingularMotility{0.5};
    const ModelParams p{1.0, 2, {2.0, 2.0}};
    const double pt = 1.5, qt = -0.5;
    std::vector<double> good, swapped;
    double gap = 0.04;
    for (int n : {16, 32, 64}) {
        const auto [a, b] = smooth_pair(n, gap, fam, p, 3.0);
        good.push_back(std::abs(identity_residual(a, b, pt, qt, fam, p)));
        swapped.push_back(std::abs(identity_residual(a, b, pt, qt, fam, p, CrossTermExponent::AMinusOne)));
        gap *= 0.5;
    }
    CHECK(good[0] / good[1] >= 1.8);
    CHECK(good[1] / good[2] >= 1.8);
    // the swapped variant stalls at an O(1) discrepancy
    CHECK(swapped[2] > 10.0 * good[2]);
    CHECK(swapped[1] / swapped[2] < 1.5);
}

TEST_CASE("sample examples") {
    auto r = sample(constant_state(1.0, 1.0), SingularMotility{0.5}, MonitorConfig{});
    CHECK(r.mass_u == doctest::Approx(1.0));
    CHECK(r.int_v == doctest::Approx(1.0));
    CHECK(r.min_v == 1.0);
    CHECK(r.sup_u == 1.0);
    CHECK(r.sup_grad_v == 0.0);
    CHECK(r.lp_u.size() == 2);
    CHECK(r.W == doctest::Approx(1.0));

    r = sample(constant_state(2.0, 1.0), SingularMotility{0.5}, MonitorConfig{});
    CHECK(r.mass_u == doctest::Approx(2.0));
    CHECK(r.int_v == doctest::Approx(1.0));

    State s = constant_state(1.0, 1.0);
    s.v.at(4, 4) = 4.0;
    r = sample(s, AlgebraicMotility{1.0, 1.0, 0.5}, MonitorConfig{});
    CHECK(r.min_gamma == doctest::Approx(0.25));
}

TEST_CASE("Monitor fills residuals from the previous observation") {
    Monitor mon(SingularMotility{0.5}, ModelParams{}, MonitorConfig{});
    mon.observe(constant_state(1.0, 1.0, 0.0));
    mon.observe(constant_state(1.0, 1.0, 1.0));
    REQUIRE(mon.records().size() == 2);
    CHECK(mon.records()[0].ineq_residual == 0.0);
    CHECK(mon.records()[1].ineq_residual == 0.0);
    CHECK(mon.records()[1].identity_residual == 0.0);
}

TEST_CASE("trend helpers") {
    CHECK(trend_bounded({2, 1, 3, 3, 3, 3, 3, 3, 3, 3}));
    CHECK_FALSE(trend_bounded({1, 1, 1, 1, 1, 1, 1, 1, 1, 5}));
    CHECK(trend_bounded({}));
    CHECK_FALSE(trend_bounded({1.0, std::nan("")}));
    CHECK(growth_trend({1, 1, 1, 3}));
    CHECK_FALSE(growth_trend({1, 1, 1, 1.5}));
    CHECK(growth_trend({1, 2, kInfinity}));
}

}  // TEST_SUITE
