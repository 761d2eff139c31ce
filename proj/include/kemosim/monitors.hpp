#pragma once

/// @file monitors.hpp
/// @brief Functionals tracked along a run and discrete residuals of the two
/// evolution relations for the weighted integral of u^p v^-q.

#include <optional>
#include <vector>

#include "kemosim/field.hpp"

namespace kemosim {

struct MonitorRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double int_v = 0.0;
    double min_v = 0.0;
    double min_gamma = 0.0;
    double sup_u = 0.0;
    double sup_grad_v = 0.0;
    std::vector<double> lp_u;
    double W = 0.0;
    double ineq_residual = 0.0;
    double identity_residual = 0.0;
};

struct MonitorConfig {
    std::vector<double> lp_exponents{2.0, 4.0};
    double p = 1.25;  ///< weighted functional exponent on u
    double q = 0.1;   ///< weighted functional exponent on 1/v
};

/// Midpoint-rule integral of u^p v^-q. Throws DomainError if some v <= 0.
double weighted_functional(const State& state, double p, double q);

/// Midpoint-rule integral of u^a v^b (v > 0).
double power_integral(const ScalarField& u, const ScalarField& v, double a, double b);

/// (W(t2) - W(t1)) / (t2 - t1) - [q W(t2) - q int u^{p+1} v^{-q-1}(t2)].
/// The relation it measures holds with "<= 0" for admissible (p, q).
double inequality_residual(double t_prev, double W_prev, const State& state, double p, double q);

/// Which exponent the v factor of the mixed-gradient term carries in the
/// evolution identity for int u^a v^b. `BMinusOne` is the one that
/// follows from integrating by parts; `AMinusOne` is kept only so
/// tests can show it does not converge.
enum class CrossTermExponent { BMinusOne, AMinusOne };

/// Right-hand side of the evolution identity for int u^a v^b, evaluated by
/// quadrature with centred discrete gradients.
double identity_rhs(const State& state, double a, double b, const MotilityFamily& fam,
                    const ModelParams& params,
                    CrossTermExponent variant = CrossTermExponent::BMinusOne);

/// Forward difference of int u^a v^b between two states minus the
/// trapezoidal average of identity_rhs at the two states.
double identity_residual(const State& s1, const State& s2, double a, double b,
                         const MotilityFamily& fam, const ModelParams& params,
                         CrossTermExponent variant = CrossTermExponent::BMinusOne);

/// Every instantaneous field of a MonitorRecord; the residuals are left 0.
MonitorRecord sample(const State& state, const MotilityFamily& fam, const MonitorConfig& config);

/// Stateful sampler: fills residuals from the previously observed state.
class Monitor {
public:
    Monitor(MotilityFamily fam, ModelParams params, MonitorConfig config);

    const MonitorRecord& observe(const State& state);

    const std::vector<MonitorRecord>& records() const noexcept { return records_; }
    const MonitorConfig& config() const noexcept { return config_; }

private:
    MotilityFamily fam_;
    ModelParams params_;
    MonitorConfig config_;
    std::optional<State> previous_;
    std::vector<MonitorRecord> records_;
};

/// No-growth-trend test: every value after the leading `early_fraction` of
/// the series stays below `factor` times the maximum over that leading part.
bool trend_bounded(const std::vector<double>& series, double early_fraction = 0.1,
                   double factor = 2.0);

/// Growth trend: the maximum over the trailing half exceeds `factor` times
/// the first value.
bool growth_trend(const std::vector<double>& series, double factor = 2.0);

}  // namespace kemosim
