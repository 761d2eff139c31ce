#include "kemosim/monitors.hpp"

#include <algorithm>
#include <cmath>

#include "kemosim/errors.hpp"

namespace kemosim {

namespace {

void require_positive_v(const ScalarField& v) {
    for (double x : v.values)
        if (!(x > 0.0)) throw DomainError("weighted integrals need v > 0 in every cell");
}

double quadrature(std::vector<double>& integrand, const Grid& g) {
    return pairwise_sum(integrand) * g.cell_volume();
}

}  // namespace

double power_integral(const ScalarField& u, const ScalarField& v, double a, double b) {
    require_positive_v(v);
    std::vector<double> f(u.values.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = std::pow(u.values[k], a) * std::pow(v.values[k], b);
    return quadrature(f, u.grid);
}

double weighted_functional(const State& state, double p, double q) {
    return power_integral(state.u, state.v, p, -q);
}

double inequality_residual(double t_prev, double W_prev, const State& state, double p, double q) {
    const double dt = state.t - t_prev;
    if (!(dt > 0.0)) throw DomainError("inequality residual needs t2 > t1");
    const double W = weighted_functional(state, p, q);
    const double dissipation = power_integral(state.u, state.v, p + 1.0, -q - 1.0);
    return (W - W_prev) / dt - (q * W - q * dissipation);
}

double identity_rhs(const State& state, double a, double b, const MotilityFamily& fam,
                    const ModelParams& params, CrossTermExponent variant) {
    require_positive_v(state.v);
    const auto cm = evaluate_cells(fam, state.v);
    const auto gu = centered_gradient(state.u);
    const auto gv = centered_gradient(state.v);
    const auto& u = state.u.values;
    const auto& v = state.v.values;
    const double d = params.d;
    const double cross_exp = variant == CrossTermExponent::BMinusOne ? b - 1.0 : a - 1.0;

    std::vector<double> f(u.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double grad_u2 = gu[0][k] * gu[0][k] + gu[1][k] * gu[1][k];
        const double grad_v2 = gv[0][k] * gv[0][k] + gv[1][k] * gv[1][k];
        const double grad_uv = gu[0][k] * gv[0][k] + gu[1][k] * gv[1][k];
        const double gamma = cm.gamma[k];
        const double pb = v[k] * cm.phi[k];

        double term = 0.0;
        if (a * (a - 1.0) != 0.0)
            term -= a * (a - 1.0) * std::pow(u[k], a - 2.0) * std::pow(v[k], b) * gamma * grad_u2;
        if (b != 0.0) {
            term += std::pow(u[k], a) * std::pow(v[k], b - 2.0) * (a * b * pb - d * b * (b - 1.0)) *
                    grad_v2;
            term += b * std::pow(u[k], a) * std::pow(v[k], b - 1.0) * (u[k] - v[k]);
        }
        if (a != 0.0) {
            const double coef = (a - 1.0) * pb - b * gamma - d * b;
            if (coef != 0.0)
                term += a * std::pow(u[k], a - 1.0) * std::pow(v[k], cross_exp) * coef * grad_uv;
        }
        f[k] = term;
    }
    return quadrature(f, state.u.grid);
}

double identity_residual(const State& s1, const State& s2, double a, double b,
                         const MotilityFamily& fam, const ModelParams& params,
                         CrossTermExponent variant) {
    const double dt = s2.t - s1.t;
    if (!(dt > 0.0)) throw DomainError("identity residual needs t2 > t1");
    const double I1 = power_integral(s1.u, s1.v, a, b);
    const double I2 = power_integral(s2.u, s2.v, a, b);
    const double r1 = identity_rhs(s1, a, b, fam, params, variant);
    const double r2 = identity_rhs(s2, a, b, fam, params, variant);
    return (I2 - I1) / dt - 0.5 * (r1 + r2);
}

MonitorRecord sample(const State& state, const MotilityFamily& fam, const MonitorConfig& config) {
    MonitorRecord rec;
    rec.t = state.t;
    rec.mass_u = integrate(state.u);
    rec.int_v = integrate(state.v);
    rec.min_v = state.v.min();
    rec.sup_u = state.u.max_abs();
    rec.sup_grad_v = max_face_gradient(state.v);
    const auto cm = evaluate_cells(fam, state.v);
    rec.min_gamma = *std::min_element(cm.gamma.begin(), cm.gamma.end());
    for (double p : config.lp_exponents) rec.lp_u.push_back(lp_norm(state.u, p));
    rec.W = weighted_functional(state, config.p, config.q);
    return rec;
}

Monitor::Monitor(MotilityFamily fam, ModelParams params, MonitorConfig config)
    : fam_(std::move(fam)), params_(std::move(params)), config_(std::move(config)) {}

const MonitorRecord& Monitor::observe(const State& state) {
    MonitorRecord rec = sample(state, fam_, config_);
    if (previous_ && state.t > previous_->t) {
        rec.ineq_residual =
            inequality_residual(previous_->t, records_.back().W, state, config_.p, config_.q);
        rec.identity_residual =
            identity_residual(*previous_, state, config_.p, -config_.q, fam_, params_);
    }
    previous_ = state;
    records_.push_back(std::move(rec));
    return records_.back();
}

bool trend_bounded(const std::vector<double>& series, double early_fraction, double factor) {
    if (series.empty()) return true;
    const auto n_early = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(early_fraction * static_cast<double>(series.size()))));
    const double early_max =
        *std::max_element(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(n_early));
    const double bound = factor * early_max;
    return std::all_of(series.begin(), series.end(),
                       [bound](double x) { return std::isfinite(x) && x <= bound; });
}

bool growth_trend(const std::vector<double>& series, double factor) {
    if (series.size() < 2) return false;
    const auto mid = series.begin() + static_cast<std::ptrdiff_t>(series.size() / 2);
    const double late_max = *std::max_element(mid, series.end());
    return !std::isfinite(late_max) || late_max > factor * series.front();
}

}  // namespace kemosim
