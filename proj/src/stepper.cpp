#include "kemosim/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "kemosim/errors.hpp"

namespace kemosim {

namespace {

constexpr int kMaxRetries = 20;
constexpr double kNegativeTolerance = 1e-12;
constexpr std::size_t kGrowthWindow = 100;

void axpy_into(std::vector<double>& out, const std::vector<double>& x, double a,
               const std::vector<double>& y) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[k] + a * y[k];
}

bool monotone_growth(const std::deque<double>& history) {
    if (history.size() <= kGrowthWindow) return false;
    for (std::size_t k = 1; k < history.size(); ++k)
        if (!(history[k] > history[k - 1])) return false;
    return true;
}

}  // namespace

void StepControl::validate() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw DomainError("cfl_safety must lie in (0, 1]");
    if (!(dt_min > 0.0) || !(dt_max > dt_min)) throw DomainError("need 0 < dt_min < dt_max");
    if (!(u_blowup_threshold > 0.0)) throw DomainError("u_blowup_threshold must be positive");
    if (!(v_floor > 0.0)) throw DomainError("v_floor must be positive");
    if (!(gamma_floor >= 0.0)) throw DomainError("gamma_floor must be nonnegative");
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "Completed";
        case RunStatus::BlowUpSuspected: return "BlowUpSuspected";
        case RunStatus::DtUnderflow: return "DtUnderflow";
        case RunStatus::PositivityLost: return "PositivityLost";
    }
    return "Unknown";
}

namespace {

Rhs rhs_impl(const State& state, const MotilityFamily& fam, const ModelParams& params,
             FluxDiagnostics* diag, double gamma_floor) {
    Rhs r{chemotactic_flux_divergence(state, fam, diag, gamma_floor), laplacian_neumann(state.v)};
    const auto& u = state.u.values;
    const auto& v = state.v.values;
    auto& dv = r.dv_dt.values;
    for (std::size_t k = 0; k < dv.size(); ++k) dv[k] = params.d * dv[k] + u[k] - v[k];
    return r;
}

}  // namespace

Rhs rhs(const State& state, const MotilityFamily& fam, const ModelParams& params) {
    return rhs_impl(state, fam, params, nullptr, 0.0);
}

DtEstimate estimate_dt(const State& state, const MotilityFamily& fam, const ModelParams& params,
                       const StepControl& ctrl) {
    const auto cm = evaluate_cells(fam, state.v);
    const Grid& g = state.u.grid;
    const double gamma_max = *std::max_element(cm.gamma.begin(), cm.gamma.end());
    const double diffusivity = std::max(gamma_max, params.d);
    double inv_h2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) inv_h2 += 1.0 / (g.spacing(a) * g.spacing(a));
    const double diffusive = 1.0 / (2.0 * diffusivity * inv_h2);

    const double w_max = max_face_velocity(state.v, cm);
    const double advective = w_max > 0.0 ? g.min_spacing() / w_max : kInfinity;

    DtEstimate est;
    est.dt = std::min(ctrl.cfl_safety * std::min(diffusive, advective), ctrl.dt_max);
    if (!(est.dt >= ctrl.dt_min)) {
        est.dt = ctrl.dt_min;
        est.clamped = true;
    }
    return est;
}

State euler_stage(const State& state, const MotilityFamily& fam, const ModelParams& params,
                  double dt) {
    const Rhs k = rhs(state, fam, params);
    State out{state.u, state.v, state.t + dt};
    axpy_into(out.u.values, state.u.values, dt, k.du_dt.values);
    axpy_into(out.v.values, state.v.values, dt, k.dv_dt.values);
    return out;
}

StepResult step(const State& state, const MotilityFamily& fam, const ModelParams& params,
                const StepControl& ctrl, double dt_cap) {
    StepResult res{state, 0.0, 0, StepStatus::Accepted, false};
    const DtEstimate est = estimate_dt(state, fam, params, ctrl);
    if (est.clamped) {
        res.status = StepStatus::DtUnderflow;
        return res;
    }
    double dt = std::min(est.dt, dt_cap);

    FluxDiagnostics diag;
    const Rhs k1 = rhs_impl(state, fam, params, &diag, ctrl.gamma_floor);
    res.degenerate = diag.degenerate;

    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        res.retries = attempt;
        if (attempt > 0) {
            dt *= 0.5;
            if (dt < ctrl.dt_min) {
                res.status = StepStatus::DtUnderflow;
                res.state = state;
                return res;
            }
        }
        State stage{state.u, state.v, state.t + dt};
        axpy_into(stage.u.values, state.u.values, dt, k1.du_dt.values);
        axpy_into(stage.v.values, state.v.values, dt, k1.dv_dt.values);

        Rhs k2{ScalarField(state.u.grid), ScalarField(state.u.grid)};
        try {
            k2 = rhs(stage, fam, params);
        } catch (const DomainError&) {
            continue;  // stage left the domain of a singular family
        }

        State next{state.u, state.v, state.t + dt};
        auto& u = next.u.values;
        auto& v = next.v.values;
        const double half = 0.5 * dt;
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = state.u[k] + half * (k1.du_dt[k] + k2.du_dt[k]);
            v[k] = state.v[k] + half * (k1.dv_dt[k] + k2.dv_dt[k]);
        }
        if (!next.u.all_finite() || !next.v.all_finite()) {
            if (attempt == kMaxRetries) {
                res.state = std::move(next);
                res.dt = dt;
                return res;  // the run loop classifies non-finite states
            }
            continue;
        }

        const double tol = kNegativeTolerance * next.u.max_abs();
        if (next.u.min() < -tol) continue;
        if (next.v.min() < ctrl.v_floor) continue;
        for (double& x : u) x = std::max(x, 0.0);
        res.state = std::move(next);
        res.dt = dt;
        return res;
    }
    res.status = StepStatus::PositivityLost;
    res.state = state;
    return res;
}

RunOutcome run(const State& initial, const MotilityFamily& fam, const ModelParams& params,
               const StepControl& ctrl, double horizon, double sample_every,
               const MonitorHook& hook) {
    ctrl.validate();
    if (!(horizon > initial.t)) throw DomainError("horizon must exceed the initial time");
    if (!(sample_every > 0.0)) throw DomainError("sample_every must be positive");
    if (!(params.d > 0.0)) throw DomainError("d must be positive");

    RunOutcome out{RunStatus::Completed, initial};
    State& s = out.final_state;
    double last_hooked = -kInfinity;
    auto notify = [&](const State& st) {
        if (hook && st.t != last_hooked) {
            hook(st);
            last_hooked = st.t;
        }
    };
    notify(s);

    const double t0 = initial.t;
    std::int64_t sample_index = 1;
    auto next_sample_time = [&] {
        return std::isfinite(sample_every) ? t0 + static_cast<double>(sample_index) * sample_every
                                           : kInfinity;
    };

    std::deque<double> sup_history;
    auto record_sup = [&](double sup) {
        sup_history.push_back(sup);
        if (sup_history.size() > kGrowthWindow + 1) sup_history.pop_front();
    };

    double sup_u = s.u.max_abs();
    record_sup(sup_u);
    if (!s.u.all_finite() || sup_u > ctrl.u_blowup_threshold) {
        out.status = RunStatus::BlowUpSuspected;
        return out;
    }

    while (s.t < horizon) {
        const double target = std::min(horizon, next_sample_time());
        const double cap = target - s.t;
        StepResult r = step(s, fam, params, ctrl, cap);
        out.degenerate_seen = out.degenerate_seen || r.degenerate;
        if (r.status == StepStatus::DtUnderflow) {
            out.status = monotone_growth(sup_history) ? RunStatus::BlowUpSuspected
                                                      : RunStatus::DtUnderflow;
            break;
        }
        if (r.status == StepStatus::PositivityLost) {
            out.status = RunStatus::PositivityLost;
            break;
        }
        const bool landed = r.dt >= cap;
        s = std::move(r.state);
        if (landed) s.t = target;
        ++out.steps_taken;

        sup_u = s.u.max_abs();
        record_sup(sup_u);
        if (!s.u.all_finite() || !s.v.all_finite() || sup_u > ctrl.u_blowup_threshold) {
            out.status = RunStatus::BlowUpSuspected;
            notify(s);
            return out;
        }
        if (landed && target == next_sample_time()) {
            ++sample_index;
            notify(s);
        } else if (landed && s.t >= horizon) {
            notify(s);
        }
    }
    if (out.status != RunStatus::Completed) notify(s);
    return out;
}

}  // namespace kemosim
