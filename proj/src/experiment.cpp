#include "kemosim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "kemosim/errors.hpp"
#include "kemosim/io.hpp"

namespace kemosim {

namespace {

nlohmann::json number_or_text(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

void require_valid(const ExperimentConfig& cfg) {
    auto errors = validate_config(cfg);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

}  // namespace

AuditOutcome audit_experiment(const ExperimentConfig& cfg) {
    AuditOutcome out;
    double v_min = cfg.audit.v_min;
    const auto* alg = std::get_if<AlgebraicMotility>(&cfg.family);
    if (alg != nullptr && cfg.eta) v_min = *cfg.eta;
    out.report = audit(cfg.family, cfg.model, v_min, cfg.audit.v_max, cfg.audit.grid_points);
    out.verdict = out.report.h3_ok;
    if (alg != nullptr) {
        out.eta = cfg.eta.value_or(cfg.audit.v_min);
        out.closed_form = algebraic_threshold(alg->sigma, alg->lambda, alg->alpha, cfg.model.d,
                                             out.eta, cfg.model.n_dim);
        out.verdict = out.closed_form->bounded_claim;
    }
    return out;
}

std::string audit_report_json(const ExperimentConfig& cfg, const AuditOutcome& o) {
    const AuditReport& r = o.report;
    nlohmann::ordered_json j;
    j["family"] = family_kind(cfg.family);
    j["d"] = cfg.model.d;
    j["n_dim"] = cfg.model.n_dim;
    j["h1_ok"] = r.h1_ok;
    j["h2_ok"] = r.h2_ok;
    j["inf_F"] = number_or_text(r.inf_F);
    j["inf_F_location"] = r.inf_F_location;
    j["tail_limited"] = r.tail_limited;
    j["tail_F"] = number_or_text(r.tail_F);
    j["h3_ok"] = r.h3_ok;
    j["h3_margin"] = number_or_text(r.h3_margin);
    j["scan_range"] = {r.v_min, r.v_max};
    j["grid_points"] = r.grid_points;
    j["refinement_levels"] = r.refinement_levels;
    if (o.closed_form) {
        j["closed_form"] = {
            {"eta", o.eta},
            {"inf_F_closed", number_or_text(o.closed_form->inf_F_closed)},
            {"bounded_claim", o.closed_form->bounded_claim},
            {"case", o.closed_form->large_lambda_case ? "lambda(1-alpha) > 1" : "lambda(1-alpha) <= 1"},
            {"scan_minus_closed", number_or_text(r.inf_F - o.closed_form->inf_F_closed)},
        };
    }
    j["verdict"] = o.verdict ? "pass" : "fail";
    return j.dump(2) + "\n";
}

double RunSummary::min_v_seen() const {
    double m = kInfinity;
    for (const auto& r : records) m = std::min(m, r.min_v);
    return m;
}

std::vector<double> RunSummary::column(double MonitorRecord::*field) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.*field);
    return out;
}

ExponentChoice resolve_exponents(const ExperimentConfig& cfg) {
    if (cfg.p && cfg.q) {
        ExponentChoice c;
        c.p = *cfg.p;
        c.q = *cfg.q;
        c.feasible = true;
        return c;
    }
    ExponentChoice c = choose_exponents(cfg.family, cfg.model, cfg.audit.v_min, cfg.audit.v_max);
    if (!c.feasible) {
        c.p = std::max(1.0, cfg.model.half_dim()) + 0.25;
        c.q = 0.1;
    }
    return c;
}

RunSummary run_experiment(const ExperimentConfig& cfg,
                          const std::optional<std::filesystem::path>& out_dir) {
    require_valid(cfg);
    const State initial = make_initial_state(cfg);
    const ExponentChoice exps = resolve_exponents(cfg);

    RunSummary summary;
    summary.p = exps.p;
    summary.q = exps.q;
    summary.exponents_feasible = exps.feasible;

    MonitorConfig mcfg;
    mcfg.lp_exponents = cfg.lp_exponents;
    mcfg.p = exps.p;
    mcfg.q = exps.q;
    Monitor monitor(cfg.family, cfg.model, mcfg);

    std::optional<SeriesWriter> writer;
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream(*out_dir / "effective_config.toml") << to_toml(cfg);
        writer.emplace(*out_dir / "series.csv", cfg.lp_exponents.size());
    }
    double next_snapshot = initial.t;

    auto hook = [&](const State& s) {
        const MonitorRecord& rec = monitor.observe(s);
        if (writer) writer->write(rec);
        if (out_dir && cfg.snapshots_every && s.t >= next_snapshot) {
            write_snapshot(*out_dir / snapshot_name(s.t), s);
            while (next_snapshot <= s.t) next_snapshot += *cfg.snapshots_every;
        }
    };

    RunOutcome outcome = run(initial, cfg.family, cfg.model, cfg.step, initial.t + cfg.horizon,
                             cfg.sample_every, hook);
    summary.status = outcome.status;
    summary.steps = outcome.steps_taken;
    summary.records = monitor.records();
    summary.final_state = std::move(outcome.final_state);
    return summary;
}

int exit_code_for(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return exit_code::ok;
        case RunStatus::BlowUpSuspected: return exit_code::blowup;
        case RunStatus::DtUnderflow:
        case RunStatus::PositivityLost: return exit_code::numerical_failure;
    }
    return exit_code::error;
}

std::string classify_regime(const RunSummary& run) {
    if (run.status == RunStatus::BlowUpSuspected) return "blowup";
    return trend_bounded(run.column(&MonitorRecord::sup_u)) ? "bounded" : "growth";
}

SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    const auto c1 = spec.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
    if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos || eq == 0)
        throw ConfigError({"--axis '" + spec + "': expected name=start:stop:count"});
    SweepAxis axis;
    axis.name = spec.substr(0, eq);
    double start = 0.0;
    double stop = 0.0;
    long count = 0;
    try {
        std::size_t used = 0;
        start = std::stod(spec.substr(eq + 1, c1 - eq - 1));
        stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        const std::string count_text = spec.substr(c2 + 1);
        count = std::stol(count_text, &used);
        if (used != count_text.size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
        throw ConfigError({"--axis '" + spec + "': start, stop and count must be numbers"});
    }
    if (count < 1) throw ConfigError({"--axis '" + spec + "': count must be >= 1"});
    for (long k = 0; k < count; ++k) {
        const double s = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        axis.values.push_back(k == count - 1 && count > 1 ? stop : start + s * (stop - start));
    }
    return axis;
}

ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& name, double value) {
    ExperimentConfig out = cfg;
    auto family_mismatch = [&] {
        throw ConfigError({"--axis " + name + ": not a parameter of the " + family_kind(cfg.family) +
                           " family"});
    };
    if (name == "chi") {
        auto* s = std::get_if<SingularMotility>(&out.family);
        if (!s) family_mismatch();
        s->chi = value;
    } else if (name == "sigma" || name == "lambda" || name == "alpha") {
        auto* a = std::get_if<AlgebraicMotility>(&out.family);
        if (!a) family_mismatch();
        (name == "sigma" ? a->sigma : name == "lambda" ? a->lambda : a->alpha) = value;
    } else if (name == "gamma0" || name == "phi0") {
        auto* c = std::get_if<ConstantMotility>(&out.family);
        if (!c) family_mismatch();
        (name == "gamma0" ? c->gamma0 : c->phi0) = value;
    } else if (name == "eta") {
        out.eta = value;
    } else if (name == "d") {
        out.model.d = value;
    } else if (name == "amplitude") {
        out.initial.amplitude = value;
    } else if (name == "width") {
        out.initial.width = value;
    } else if (name == "baseline_u") {
        out.initial.baseline_u = value;
    } else if (name == "baseline_v") {
        out.initial.baseline_v = value;
    } else if (name == "horizon") {
        out.horizon = value;
    } else {
        throw ConfigError({"--axis " + name + ": unknown sweep parameter"});
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes,
                                const std::filesystem::path& out_dir, const SweepOptions& opts) {
    // Validate every axis name up front so a typo fails before any run starts.
    for (const auto& axis : axes) (void)with_parameter(cfg, axis.name, axis.values.front());

    std::size_t n_points = 1;
    for (const auto& axis : axes) n_points *= axis.values.size();

    std::filesystem::create_directories(out_dir);
    std::ofstream table(out_dir / "sweep.csv");
    if (!table) throw std::runtime_error("cannot open " + (out_dir / "sweep.csv").string());
    table << "index";
    for (const auto& axis : axes) table << ',' << axis.name;
    table << ",audit,inf_F,status,final_sup_u,min_v,regime\n" << std::flush;

    std::vector<SweepRow> rows;
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto point_values = [&](std::size_t index) {
        std::vector<double> vals(axes.size());
        std::size_t rem = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            vals[a] = axes[a].values[rem % axes[a].values.size()];
            rem /= axes[a].values.size();
        }
        return vals;
    };

    auto work = [&] {
        for (std::size_t index = next++; index < n_points; index = next++) {
            SweepRow row;
            row.index = index;
            row.values = point_values(index);
            ExperimentConfig pc = cfg;
            for (std::size_t a = 0; a < axes.size(); ++a)
                pc = with_parameter(pc, axes[a].name, row.values[a]);
            if (!opts.full_resolution)
                for (int& c : pc.cells) c = std::max(4, c / 2);
            pc.output_dir = (out_dir / ("point_" + std::to_string(index))).string();

            if (!validate_config(pc).empty()) {
                row.status = "Invalid";
                row.regime = "invalid";
            } else {
                const AuditOutcome ao = audit_experiment(pc);
                row.audit_pass = ao.verdict;
                row.inf_F = ao.closed_form ? ao.closed_form->inf_F_closed : ao.report.inf_F;
                const RunSummary rs = run_experiment(pc, std::filesystem::path(pc.output_dir));
                row.status = to_string(rs.status);
                row.final_sup_u = rs.final_sup_u();
                row.min_v = rs.min_v_seen();
                row.regime = classify_regime(rs);
            }

            std::lock_guard lock(mu);
            table << row.index;
            for (double x : row.values) table << ',' << format_double(x);
            table << ',' << (row.audit_pass ? "pass" : "fail") << ',' << format_double(row.inf_F)
                  << ',' << row.status << ',' << format_double(row.final_sup_u) << ','
                  << format_double(row.min_v) << ',' << row.regime << '\n'
                  << std::flush;
            rows.push_back(std::move(row));
        }
    };

    const int n_threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(n_points)));
    {
        std::vector<std::jthread> pool;
        for (int k = 1; k < n_threads; ++k) pool.emplace_back(work);
        work();
    }
    std::sort(rows.begin(), rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.index < b.index; });
    return rows;
}

int cmd_audit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const AuditOutcome o = audit_experiment(cfg);
    const std::string text = audit_report_json(cfg, o);
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir / "audit.json") << text;
    std::cout << text;
    return o.verdict ? exit_code::ok : exit_code::audit_failed;
}

int cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const RunSummary rs = run_experiment(cfg, out_dir);
    std::cout << "status: " << to_string(rs.status) << "\nsteps: " << rs.steps
              << "\nsamples: " << rs.records.size() << "\nexponents: p=" << format_double(rs.p)
              << " q=" << format_double(rs.q) << (rs.exponents_feasible ? "" : " (fallback)")
              << "\nfinal sup_u: " << format_double(rs.final_sup_u())
              << "\nmin v: " << format_double(rs.min_v_seen()) << "\nregime: " << classify_regime(rs)
              << "\n";
    return exit_code_for(rs.status);
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes,
              const std::filesystem::path& out_dir, const SweepOptions& opts) {
    const auto rows = run_sweep(cfg, axes, out_dir, opts);
    std::cout << rows.size() << " point(s) written to " << (out_dir / "sweep.csv").string() << "\n";
    for (const auto& r : rows)
        std::cout << "  #" << r.index << " audit=" << (r.audit_pass ? "pass" : "fail")
                  << " status=" << r.status << " regime=" << r.regime << "\n";
    return exit_code::ok;
}

}  // namespace kemosim
