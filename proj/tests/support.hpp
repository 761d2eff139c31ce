#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kemosim/field.hpp"
#include "kemosim/motility.hpp"

namespace kemosim::testing {

inline constexpr double kPi = 3.14159265358979323846;

/// Deterministic source for hand-rolled property generators.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// log-uniform on [lo, hi], lo > 0
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    MotilityFamily family() {
        switch (integer(0, 2)) {
            case 0: return ConstantMotility{log_uniform(0.05, 20.0), uniform(0.0, 3.0)};
            case 1: return SingularMotility{log_uniform(0.05, 5.0)};
            default: return AlgebraicMotility{log_uniform(0.1, 10.0), uniform(0.1, 4.0), uniform(0.05, 0.95)};
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Relative closeness with an absolute floor of 1.
inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline ScalarField field_from(const Grid& g, auto&& fn) {
    ScalarField f(g);
    for (int j = 0; j < (g.dim() == 2 ? g.cells(1) : 1); ++j)
        for (int i = 0; i < g.cells(0); ++i)
            f.at(i, j) = fn(g.center(0, i), g.dim() == 2 ? g.center(1, j) : 0.0);
    return f;
}

/// Smooth positive data with zero normal derivative on [0, Lx] x [0, Ly].
inline State smooth_state(const Grid& g, double amp = 0.5) {
    const double lx = g.length(0);
    const double ly = g.dim() == 2 ? g.length(1) : 1.0;
    auto u = field_from(g, [&](double x, double y) {
        return 1.0 + amp * std::cos(kPi * x / lx) * (g.dim() == 2 ? std::cos(kPi * y / ly) : 1.0);
    });
    auto v = field_from(g, [&](double x, double y) {
        return 1.0 + 0.5 * amp * std::cos(2.0 * kPi * x / lx) + (g.dim() == 2 ? 0.25 * amp * std::cos(kPi * y / ly) : 0.0);
    });
    return State{std::move(u), std::move(v), 0.0};
}

inline State random_state(const Grid& g, Gen& gen, double v_lo = 0.5) {
    ScalarField u(g), v(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        u[k] = gen.uniform(0.0, 3.0);
        v[k] = gen.uniform(v_lo, 3.0);
    }
    return State{std::move(u), std::move(v), 0.0};
}

}  // namespace kemosim::testing
