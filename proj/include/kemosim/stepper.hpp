#pragma once

/// @file stepper.hpp
/// @brief Explicit Heun time integration of
///   u_t = div(gamma(v) grad u - u phi(v) grad v),
///   v_t = d lap v - v + u
/// with an adaptive stability bound, positivity guard and blow-up heuristics.

#include <cstdint>
#include <functional>
#include <string>

#include "kemosim/field.hpp"

namespace kemosim {

struct StepControl {
    double cfl_safety = 0.4;
    double dt_min = 1e-10;
    double dt_max = 0.05;
    double u_blowup_threshold = 1e8;
    double v_floor = 1e-12;
    double gamma_floor = 1e-10;  ///< below this a face is flagged as degenerate

    /// Throws DomainError on inconsistent settings.
    void validate() const;

    bool operator==(const StepControl&) const = default;
};

enum class RunStatus { Completed, BlowUpSuspected, DtUnderflow, PositivityLost };

std::string to_string(RunStatus s);

struct Rhs {
    ScalarField du_dt;
    ScalarField dv_dt;
};

Rhs rhs(const State& state, const MotilityFamily& fam, const ModelParams& params);

struct DtEstimate {
    double dt = 0.0;
    bool clamped = false;  ///< the stability bound fell below dt_min
};

/// cfl_safety * min(diffusive bound, advective bound), capped by dt_max and
/// clamped below by dt_min.
DtEstimate estimate_dt(const State& state, const MotilityFamily& fam, const ModelParams& params,
                       const StepControl& ctrl);

inline double stable_dt(const State& state, const MotilityFamily& fam, const ModelParams& params,
                        const StepControl& ctrl) {
    return estimate_dt(state, fam, params, ctrl).dt;
}

/// state + dt * rhs(state), without any guard.
State euler_stage(const State& state, const MotilityFamily& fam, const ModelParams& params,
                  double dt);

enum class StepStatus { Accepted, PositivityLost, DtUnderflow };

struct StepResult {
    State state;
    double dt = 0.0;
    int retries = 0;
    StepStatus status = StepStatus::Accepted;
    bool degenerate = false;
};

/// One Heun step with the dt from estimate_dt, optionally capped by `dt_cap`
/// (used to land on sample times). Negative u beyond 1e-12 * ||u||_inf halves
/// dt, up to 20 times.
StepResult step(const State& state, const MotilityFamily& fam, const ModelParams& params,
                const StepControl& ctrl, double dt_cap = kInfinity);

struct RunOutcome {
    RunStatus status = RunStatus::Completed;
    State final_state;
    std::int64_t steps_taken = 0;
    bool degenerate_seen = false;
};

using MonitorHook = std::function<void(const State&)>;

/// Advances to `horizon`. `hook` (if set) sees the initial state, every
/// state at t = t0 + k * sample_every and the final state.
RunOutcome run(const State& initial, const MotilityFamily& fam, const ModelParams& params,
               const StepControl& ctrl, double horizon, double sample_every = kInfinity,
               const MonitorHook& hook = {});

}  // namespace kemosim
