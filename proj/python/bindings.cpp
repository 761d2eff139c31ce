// Python bindings for the kemosim core.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kemosim/config.hpp"
#include "kemosim/errors.hpp"
#include "kemosim/experiment.hpp"
#include "kemosim/field.hpp"
#include "kemosim/hypothesis.hpp"
#include "kemosim/monitors.hpp"
#include "kemosim/motility.hpp"
#include "kemosim/stepper.hpp"

namespace py = pybind11;
using namespace kemosim;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
    py::array_t<double> out(static_cast<py::ssize_t>(f.values.size()));
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    if (f.grid.dim() == 2) out = out.reshape({f.grid.cells(1), f.grid.cells(0)});
    return out;
}

ScalarField from_numpy(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    std::vector<double> vals(a.data(), a.data() + a.size());
    return ScalarField(g, std::move(vals));
}

}  // namespace

PYBIND11_MODULE(_kemosim, m) {
    m.doc() = "Keller-Segel chemotaxis with signal-dependent motilities";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NegativeMotility>(m, "NegativeMotility", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // motility ---------------------------------------------------------------
    py::class_<ConstantMotility>(m, "ConstantMotility")
        .def(py::init<double, double>(), py::arg("gamma0") = 1.0, py::arg("phi0") = 0.0)
        .def_readwrite("gamma0", &ConstantMotility::gamma0)
        .def_readwrite("phi0", &ConstantMotility::phi0);
    py::class_<SingularMotility>(m, "SingularMotility")
        .def(py::init<double>(), py::arg("chi"))
        .def_readwrite("chi", &SingularMotility::chi);
    py::class_<AlgebraicMotility>(m, "AlgebraicMotility")
        .def(py::init<double, double, double>(), py::arg("sigma"), py::arg("lam"), py::arg("alpha"))
        .def_readwrite("sigma", &AlgebraicMotility::sigma)
        .def_readwrite("lam", &AlgebraicMotility::lambda)
        .def_readwrite("alpha", &AlgebraicMotility::alpha);
    py::class_<TabulatedMotility>(m, "TabulatedMotility")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>>(), py::arg("v"),
             py::arg("gamma"), py::arg("phi"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double d, int n_dim, std::vector<double> lengths) {
                 return ModelParams{d, n_dim, std::move(lengths)};
             }),
             py::arg("d") = 1.0, py::arg("n_dim") = 2, py::arg("lengths") = std::vector<double>{})
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("n_dim", &ModelParams::n_dim)
        .def_readwrite("lengths", &ModelParams::domain_lengths);

    py::class_<QInterval>(m, "QInterval")
        .def_readonly("lower", &QInterval::lower)
        .def_readonly("upper", &QInterval::upper)
        .def_readonly("upper_closed", &QInterval::upper_closed)
        .def_readonly("empty", &QInterval::empty)
        .def("contains", &QInterval::contains)
        .def("midpoint", &QInterval::midpoint);

    m.def("eval_gamma", &eval_gamma, py::arg("fam"), py::arg("v"));
    m.def("eval_phi", &eval_phi, py::arg("fam"), py::arg("v"));
    m.def("phi_bar", py::overload_cast<const MotilityFamily&, double>(&phi_bar), py::arg("fam"),
          py::arg("v"));
    m.def("eval_F", py::overload_cast<const MotilityFamily&, const ModelParams&, double>(&eval_F),
          py::arg("fam"), py::arg("params"), py::arg("v"));
    m.def(
        "coeff_ABC",
        [](const MotilityFamily& f, const ModelParams& p, double pe, double v) {
            const auto c = coeff_ABC(f, p, pe, v);
            return py::make_tuple(c.A, c.B, c.C);
        },
        py::arg("fam"), py::arg("params"), py::arg("p"), py::arg("v"));
    m.def(
        "gamma_comparators",
        [](const MotilityFamily& f, const ModelParams& p, double pe, double v) {
            const auto c = gamma_comparators(f, p, pe, v);
            return py::make_tuple(c.g1, c.g2, c.g3, c.g4);
        },
        py::arg("fam"), py::arg("params"), py::arg("p"), py::arg("v"));
    m.def("eval_g",
          py::overload_cast<const MotilityFamily&, const ModelParams&, double, double, double>(&eval_g),
          py::arg("fam"), py::arg("params"), py::arg("p"), py::arg("q"), py::arg("v"));
    m.def("q_interval",
          py::overload_cast<const MotilityFamily&, const ModelParams&, double, double>(&q_interval),
          py::arg("fam"), py::arg("params"), py::arg("p"), py::arg("v"));

    // hypothesis -------------------------------------------------------------
    py::class_<AuditReport>(m, "AuditReport")
        .def_readonly("h1_ok", &AuditReport::h1_ok)
        .def_readonly("h2_ok", &AuditReport::h2_ok)
        .def_readonly("inf_F", &AuditReport::inf_F)
        .def_readonly("inf_F_location", &AuditReport::inf_F_location)
        .def_readonly("tail_limited", &AuditReport::tail_limited)
        .def_readonly("h3_ok", &AuditReport::h3_ok)
        .def_readonly("h3_margin", &AuditReport::h3_margin);
    m.def("audit", &audit, py::arg("fam"), py::arg("params"), py::arg("v_min"), py::arg("v_max"),
          py::arg("grid_points") = 2048);
    m.def(
        "algebraic_threshold",
        [](double sigma, double lam, double alpha, double d, double eta, int n_dim) {
            const auto r = algebraic_threshold(sigma, lam, alpha, d, eta, n_dim);
            return py::make_tuple(r.inf_F_closed, r.bounded_claim, r.large_lambda_case);
        },
        py::arg("sigma"), py::arg("lam"), py::arg("alpha"), py::arg("d"), py::arg("eta"),
        py::arg("n_dim"));
    py::class_<ExponentChoice>(m, "ExponentChoice")
        .def_readonly("p", &ExponentChoice::p)
        .def_readonly("q", &ExponentChoice::q)
        .def_readonly("feasible", &ExponentChoice::feasible)
        .def_readonly("interval_used", &ExponentChoice::interval_used);
    m.def("choose_exponents", &choose_exponents, py::arg("fam"), py::arg("params"), py::arg("v_min"),
          py::arg("v_max"), py::arg("grid_points") = 512);

    // field ------------------------------------------------------------------
    py::class_<Grid>(m, "Grid")
        .def(py::init<std::vector<double>, std::vector<int>>(), py::arg("lengths"), py::arg("cells"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("size", &Grid::size)
        .def_property_readonly("cell_volume", &Grid::cell_volume)
        .def("spacing", &Grid::spacing)
        .def("cells", &Grid::cells);
    py::class_<ScalarField>(m, "ScalarField")
        .def(py::init(&from_numpy), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &ScalarField::grid)
        .def("to_numpy", &to_numpy);
    py::class_<State>(m, "State")
        .def(py::init([](const ScalarField& u, const ScalarField& v, double t) { return State{u, v, t}; }),
             py::arg("u"), py::arg("v"), py::arg("t") = 0.0)
        .def_readwrite("u", &State::u)
        .def_readwrite("v", &State::v)
        .def_readwrite("t", &State::t);
    m.def("laplacian_neumann", &laplacian_neumann);
    m.def(
        "chemotactic_flux_divergence",
        [](const State& s, const MotilityFamily& f) { return chemotactic_flux_divergence(s, f); },
        py::arg("state"), py::arg("fam"));
    m.def("integrate", &integrate);
    m.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));

    // stepper ----------------------------------------------------------------
    py::enum_<RunStatus>(m, "RunStatus")
        .value("Completed", RunStatus::Completed)
        .value("BlowUpSuspected", RunStatus::BlowUpSuspected)
        .value("DtUnderflow", RunStatus::DtUnderflow)
        .value("PositivityLost", RunStatus::PositivityLost);
    py::class_<StepControl>(m, "StepControl")
        .def(py::init<>())
        .def_readwrite("cfl_safety", &StepControl::cfl_safety)
        .def_readwrite("dt_min", &StepControl::dt_min)
        .def_readwrite("dt_max", &StepControl::dt_max)
        .def_readwrite("u_blowup_threshold", &StepControl::u_blowup_threshold)
        .def_readwrite("v_floor", &StepControl::v_floor);
    m.def(
        "rhs",
        [](const State& s, const MotilityFamily& f, const ModelParams& p) {
            auto r = rhs(s, f, p);
            return py::make_tuple(r.du_dt, r.dv_dt);
        },
        py::arg("state"), py::arg("fam"), py::arg("params"));
    m.def("stable_dt", &stable_dt, py::arg("state"), py::arg("fam"), py::arg("params"), py::arg("ctrl"));
    m.def(
        "step",
        [](const State& s, const MotilityFamily& f, const ModelParams& p, const StepControl& c) {
            return step(s, f, p, c).state;
        },
        py::arg("state"), py::arg("fam"), py::arg("params"), py::arg("ctrl"));
    py::class_<RunOutcome>(m, "RunOutcome")
        .def_readonly("status", &RunOutcome::status)
        .def_readonly("final_state", &RunOutcome::final_state)
        .def_readonly("steps_taken", &RunOutcome::steps_taken);
    m.def("run", &run, py::arg("initial"), py::arg("fam"), py::arg("params"), py::arg("ctrl"),
          py::arg("horizon"), py::arg("sample_every") = kInfinity,
          py::arg("monitor_hook") = MonitorHook{}, py::call_guard<py::gil_scoped_release>());

    // monitors ---------------------------------------------------------------
    py::class_<MonitorRecord>(m, "MonitorRecord")
        .def_readonly("t", &MonitorRecord::t)
        .def_readonly("mass_u", &MonitorRecord::mass_u)
        .def_readonly("int_v", &MonitorRecord::int_v)
        .def_readonly("min_v", &MonitorRecord::min_v)
        .def_readonly("min_gamma", &MonitorRecord::min_gamma)
        .def_readonly("sup_u", &MonitorRecord::sup_u)
        .def_readonly("sup_grad_v", &MonitorRecord::sup_grad_v)
        .def_readonly("lp_u", &MonitorRecord::lp_u)
        .def_readonly("W", &MonitorRecord::W)
        .def_readonly("ineq_residual", &MonitorRecord::ineq_residual)
        .def_readonly("identity_residual", &MonitorRecord::identity_residual);
    m.def("weighted_functional", &weighted_functional, py::arg("state"), py::arg("p"), py::arg("q"));
    m.def("inequality_residual", &inequality_residual, py::arg("t_prev"), py::arg("W_prev"),
          py::arg("state"), py::arg("p"), py::arg("q"));
    m.def(
        "identity_residual",
        [](const State& a, const State& b, double pt, double qt, const MotilityFamily& f,
           const ModelParams& p) { return identity_residual(a, b, pt, qt, f, p); },
        py::arg("s1"), py::arg("s2"), py::arg("p_tilde"), py::arg("q_tilde"), py::arg("fam"),
        py::arg("params"));
    m.def(
        "sample",
        [](const State& s, const MotilityFamily& f, std::vector<double> lp, double p, double q) {
            return sample(s, f, MonitorConfig{std::move(lp), p, q});
        },
        py::arg("state"), py::arg("fam"), py::arg("lp") = std::vector<double>{2.0, 4.0},
        py::arg("p") = 1.25, py::arg("q") = 0.1);

    // cli-level drivers ------------------------------------------------------
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("horizon", &ExperimentConfig::horizon)
        .def_readwrite("sample_every", &ExperimentConfig::sample_every)
        .def_readwrite("cells", &ExperimentConfig::cells)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });
    m.def("parse_config", &parse_config, py::arg("path"));
    m.def("parse_config_string", &parse_config_string, py::arg("text"),
          py::arg("base_dir") = std::filesystem::path{});
    m.def("to_toml", &to_toml);
    m.def(
        "audit_experiment",
        [](const ExperimentConfig& c) {
            const auto o = audit_experiment(c);
            return py::make_tuple(o.report, o.verdict);
        },
        py::arg("config"));
    m.def(
        "run_experiment",
        [](const ExperimentConfig& c, std::optional<std::filesystem::path> out) {
            const auto rs = run_experiment(c, out);
            py::dict d;
            d["status"] = rs.status;
            d["steps"] = rs.steps;
            d["p"] = rs.p;
            d["q"] = rs.q;
            d["records"] = rs.records;
            d["regime"] = classify_regime(rs);
            return d;
        },
        py::arg("config"), py::arg("out_dir") = std::nullopt);
    m.def("cmd_audit", &cmd_audit, py::arg("config"), py::arg("out_dir"));
    m.def("cmd_run", &cmd_run, py::arg("config"), py::arg("out_dir"));
}
