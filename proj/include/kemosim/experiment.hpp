#pragma once

/// @file experiment.hpp
/// @brief Config-driven audit, single run and parameter sweep, as exposed by
/// the `kemosim` command line tool.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kemosim/config.hpp"
#include "kemosim/hypothesis.hpp"
#include "kemosim/monitors.hpp"

namespace kemosim {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int blowup = 2;
inline constexpr int config = 3;
inline constexpr int audit_failed = 4;
inline constexpr int numerical_failure = 5;
}  // namespace exit_code

struct AuditOutcome {
    AuditReport report;
    std::optional<ThresholdResult> closed_form;  ///< algebraic families only
    double eta = 0.0;                            ///< lower bound used for the closed form
    bool verdict = false;                        ///< what decides the exit code
};

/// Numerical audit over cfg.audit; for algebraic families the closed-form
/// infimum over v >= eta decides the verdict because the scan is tail-limited.
AuditOutcome audit_experiment(const ExperimentConfig& cfg);

/// audit.json-style key/value text.
std::string audit_report_json(const ExperimentConfig& cfg, const AuditOutcome& outcome);

struct RunSummary {
    RunStatus status = RunStatus::Completed;
    std::int64_t steps = 0;
    double p = 0.0;
    double q = 0.0;
    bool exponents_feasible = false;
    std::vector<MonitorRecord> records;
    std::optional<State> final_state;

    double final_sup_u() const { return records.empty() ? 0.0 : records.back().sup_u; }
    double min_v_seen() const;
    std::vector<double> column(double MonitorRecord::*field) const;
};

/// Exponents for the weighted functional: explicit [exponents] if given,
/// otherwise choose_exponents over the audit range, falling back to
/// p = N/2 + 0.25 and a small q when no uniform choice exists.
ExponentChoice resolve_exponents(const ExperimentConfig& cfg);

/// Runs the simulation with monitoring. With `out_dir` set, writes
/// series.csv, effective_config.toml and snapshots there.
RunSummary run_experiment(const ExperimentConfig& cfg,
                          const std::optional<std::filesystem::path>& out_dir = std::nullopt);

int exit_code_for(RunStatus s);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

/// Parses "name=start:stop:count". Throws ConfigError.
SweepAxis parse_axis(const std::string& spec);

/// Returns a copy of cfg with the named parameter replaced.
ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& name, double value);

struct SweepOptions {
    int threads = 1;
    bool full_resolution = false;
};

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> values;
    bool audit_pass = false;
    double inf_F = 0.0;
    std::string status;  ///< RunStatus name, or "Invalid" for a rejected point
    double final_sup_u = 0.0;
    double min_v = 0.0;
    std::string regime;  ///< "bounded", "growth" or "blowup"
};

/// Cross product of the axes; one run per point at half resolution unless
/// full_resolution. Rows are appended to <out>/sweep.csv as points finish.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes,
                                const std::filesystem::path& out_dir, const SweepOptions& opts);

/// "bounded" / "growth" / "blowup" from a run's sup_u series and status.
std::string classify_regime(const RunSummary& run);

int cmd_audit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
int cmd_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes,
              const std::filesystem::path& out_dir, const SweepOptions& opts);

}  // namespace kemosim
