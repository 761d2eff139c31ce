#include "kemosim/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "kemosim/errors.hpp"
#include "kemosim/io.hpp"

namespace kemosim {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"family",
         {"kind", "chi", "sigma", "lambda", "alpha", "gamma0", "phi0", "eta", "v_table",
          "gamma_table", "phi_table"}},
        {"model", {"d", "n_dim", "lengths", "cells"}},
        {"initial", {"kind", "amplitude", "center", "width", "baseline_u", "baseline_v", "path"}},
        {"step", {"cfl_safety", "dt_min", "dt_max", "u_blowup_threshold", "v_floor", "gamma_floor"}},
        {"run", {"horizon", "sample_every", "lp", "seed"}},
        {"exponents", {"p", "q"}},
        {"output", {"dir", "snapshots_every"}},
        {"audit", {"v_min", "v_max", "grid_points"}},
    };
    return keys;
}

const std::map<std::string, std::set<std::string>>& family_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"constant", {"gamma0", "phi0"}},
        {"singular", {"chi"}},
        {"algebraic", {"sigma", "lambda", "alpha"}},
        {"custom", {"v_table", "gamma_table", "phi_table"}},
    };
    return keys;
}

class Reader {
public:
    Reader(const toml::table& root, std::vector<std::string>& errors)
        : root_(root), errors_(errors) {}

    bool has(const std::string& sec, const std::string& key) const {
        return static_cast<bool>(root_[sec][key]);
    }

    std::optional<double> number(const std::string& sec, const std::string& key) {
        auto node = root_[sec][key];
        if (!node) return std::nullopt;
        if (node.is_boolean() || !(node.is_integer() || node.is_floating_point())) {
            errors_.push_back(sec + "." + key + ": expected a number");
            return std::nullopt;
        }
        return node.value<double>();
    }

    void number(const std::string& sec, const std::string& key, double& out) {
        if (auto v = number(sec, key)) out = *v;
    }

    std::optional<std::int64_t> integer(const std::string& sec, const std::string& key) {
        auto node = root_[sec][key];
        if (!node) return std::nullopt;
        if (!node.is_integer()) {
            errors_.push_back(sec + "." + key + ": expected an integer");
            return std::nullopt;
        }
        return node.value<std::int64_t>();
    }

    std::optional<std::string> string(const std::string& sec, const std::string& key) {
        auto node = root_[sec][key];
        if (!node) return std::nullopt;
        if (!node.is_string()) {
            errors_.push_back(sec + "." + key + ": expected a string");
            return std::nullopt;
        }
        return node.value<std::string>();
    }

    std::optional<std::vector<double>> numbers(const std::string& sec, const std::string& key) {
        auto node = root_[sec][key];
        if (!node) return std::nullopt;
        const auto* arr = node.as_array();
        if (arr == nullptr) {
            errors_.push_back(sec + "." + key + ": expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& el : *arr) {
            if (!(el.is_integer() || el.is_floating_point())) {
                errors_.push_back(sec + "." + key + ": expected an array of numbers");
                return std::nullopt;
            }
            out.push_back(*el.value<double>());
        }
        return out;
    }

    std::optional<std::vector<int>> integers(const std::string& sec, const std::string& key) {
        auto node = root_[sec][key];
        if (!node) return std::nullopt;
        const auto* arr = node.as_array();
        if (arr == nullptr) {
            errors_.push_back(sec + "." + key + ": expected an array of integers");
            return std::nullopt;
        }
        std::vector<int> out;
        for (const auto& el : *arr) {
            if (!el.is_integer()) {
                errors_.push_back(sec + "." + key + ": expected an array of integers");
                return std::nullopt;
            }
            out.push_back(static_cast<int>(*el.value<std::int64_t>()));
        }
        return out;
    }

private:
    const toml::table& root_;
    std::vector<std::string>& errors_;
};

void check_structure(const toml::table& root, std::vector<std::string>& errors) {
    for (const auto& [key, node] : root) {
        const std::string sec(key.str());
        const auto it = allowed_keys().find(sec);
        if (it == allowed_keys().end()) {
            errors.push_back("unknown section [" + sec + "]");
            continue;
        }
        const auto* tbl = node.as_table();
        if (tbl == nullptr) {
            errors.push_back(sec + ": expected a table");
            continue;
        }
        for (const auto& [sub, _] : *tbl) {
            const std::string name(sub.str());
            if (!it->second.count(name)) errors.push_back(sec + "." + name + ": unknown key");
        }
    }
}

MotilityFamily read_family(Reader& r, const toml::table& root, std::vector<std::string>& errors) {
    const auto kind = r.string("family", "kind");
    if (!kind) {
        if (!r.has("family", "kind")) errors.push_back("family.kind: required");
        return SingularMotility{};
    }
    const auto fk = family_keys().find(*kind);
    if (fk == family_keys().end()) {
        errors.push_back("family.kind: '" + *kind +
                         "' is not one of constant, singular, algebraic, custom");
        return SingularMotility{};
    }
    if (const auto* tbl = root["family"].as_table()) {
        for (const auto& [k, _] : *tbl) {
            const std::string name(k.str());
            if (name == "kind" || name == "eta" || !allowed_keys().at("family").count(name)) continue;
            if (!fk->second.count(name))
                errors.push_back("family." + name + ": not a parameter of the " + *kind + " family");
        }
    }

    if (*kind == "constant") {
        ConstantMotility c;
        r.number("family", "gamma0", c.gamma0);
        r.number("family", "phi0", c.phi0);
        return c;
    }
    if (*kind == "singular") {
        SingularMotility s;
        if (!r.has("family", "chi")) errors.push_back("family.chi: required for the singular family");
        r.number("family", "chi", s.chi);
        return s;
    }
    if (*kind == "algebraic") {
        AlgebraicMotility a;
        r.number("family", "sigma", a.sigma);
        r.number("family", "lambda", a.lambda);
        r.number("family", "alpha", a.alpha);
        return a;
    }
    auto v = r.numbers("family", "v_table");
    auto g = r.numbers("family", "gamma_table");
    auto p = r.numbers("family", "phi_table");
    if (!v || !g || !p) {
        errors.push_back("family: custom family needs v_table, gamma_table and phi_table");
        return ConstantMotility{};
    }
    try {
        return TabulatedMotility(*v, *g, *p);
    } catch (const std::exception& e) {
        errors.push_back(std::string("family: ") + e.what());
        return ConstantMotility{};
    }
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

template <class T, class Fmt>
std::string array(const std::vector<T>& xs, Fmt fmt) {
    std::string out = "[";
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += fmt(xs[k]);
    }
    return out + "]";
}

const char* kind_name(InitialSpec::Kind k) {
    switch (k) {
        case InitialSpec::Kind::Constant: return "constant";
        case InitialSpec::Kind::Gaussian: return "gaussian";
        case InitialSpec::Kind::Random: return "random";
        case InitialSpec::Kind::File: return "file";
    }
    return "gaussian";
}

}  // namespace

ExperimentConfig parse_config_string(const std::string& text, const std::filesystem::path& base_dir) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "TOML syntax error: " << e.description() << " (line " << e.source().begin.line << ")";
        throw ConfigError({os.str()});
    }

    std::vector<std::string> errors;
    check_structure(root, errors);
    Reader r(root, errors);
    ExperimentConfig cfg;

    if (!root["family"]) errors.push_back("[family]: required section");
    cfg.family = read_family(r, root, errors);
    cfg.eta = r.number("family", "eta");

    r.number("model", "d", cfg.model.d);
    if (auto v = r.numbers("model", "lengths")) cfg.model.domain_lengths = *v;
    if (auto v = r.integers("model", "cells")) cfg.cells = *v;
    if (auto v = r.integer("model", "n_dim")) cfg.model.n_dim = static_cast<int>(*v);
    else cfg.model.n_dim = static_cast<int>(cfg.cells.size());

    if (auto kind = r.string("initial", "kind")) {
        if (*kind == "constant") cfg.initial.kind = InitialSpec::Kind::Constant;
        else if (*kind == "gaussian") cfg.initial.kind = InitialSpec::Kind::Gaussian;
        else if (*kind == "random") cfg.initial.kind = InitialSpec::Kind::Random;
        else if (*kind == "file") cfg.initial.kind = InitialSpec::Kind::File;
        else errors.push_back("initial.kind: '" + *kind + "' is not one of constant, gaussian, random, file");
    }
    r.number("initial", "amplitude", cfg.initial.amplitude);
    r.number("initial", "width", cfg.initial.width);
    r.number("initial", "baseline_u", cfg.initial.baseline_u);
    r.number("initial", "baseline_v", cfg.initial.baseline_v);
    if (auto c = r.numbers("initial", "center")) cfg.initial.center = *c;
    if (auto p = r.string("initial", "path")) {
        std::filesystem::path path(*p);
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        cfg.initial.path = path.string();
    }

    r.number("step", "cfl_safety", cfg.step.cfl_safety);
    r.number("step", "dt_min", cfg.step.dt_min);
    r.number("step", "dt_max", cfg.step.dt_max);
    r.number("step", "u_blowup_threshold", cfg.step.u_blowup_threshold);
    r.number("step", "v_floor", cfg.step.v_floor);
    r.number("step", "gamma_floor", cfg.step.gamma_floor);

    r.number("run", "horizon", cfg.horizon);
    r.number("run", "sample_every", cfg.sample_every);
    if (auto lp = r.numbers("run", "lp")) cfg.lp_exponents = *lp;
    if (auto seed = r.integer("run", "seed")) {
        if (*seed < 0) errors.push_back("run.seed: must be nonnegative");
        else cfg.seed = static_cast<std::uint64_t>(*seed);
    }

    cfg.p = r.number("exponents", "p");
    cfg.q = r.number("exponents", "q");

    if (auto dir = r.string("output", "dir")) cfg.output_dir = *dir;
    cfg.snapshots_every = r.number("output", "snapshots_every");

    r.number("audit", "v_min", cfg.audit.v_min);
    r.number("audit", "v_max", cfg.audit.v_max);
    if (auto g = r.integer("audit", "grid_points")) cfg.audit.grid_points = static_cast<int>(*g);

    auto semantic = validate_config(cfg);
    errors.insert(errors.end(), semantic.begin(), semantic.end());
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str(), path.parent_path());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> e;
    try {
        validate(cfg.family);
    } catch (const std::exception& ex) {
        e.push_back(std::string("family: ") + ex.what());
    }
    if (cfg.eta && !(*cfg.eta > 0.0)) e.push_back("family.eta: must be positive");

    const auto& L = cfg.model.domain_lengths;
    if (!(cfg.model.d > 0.0)) e.push_back("model.d: chemical diffusivity must be positive");
    if (cfg.model.n_dim < 1 || cfg.model.n_dim > 4) e.push_back("model.n_dim: must be 1, 2, 3 or 4");
    bool geometry_ok = true;
    if (L.empty() || L.size() > 2) {
        e.push_back("model.lengths: simulations support 1 or 2 axes");
        geometry_ok = false;
    }
    for (double x : L)
        if (!(x > 0.0) || !std::isfinite(x)) {
            e.push_back("model.lengths: every length must be positive");
            geometry_ok = false;
            break;
        }
    if (cfg.cells.size() != L.size()) {
        e.push_back("model.cells: needs one entry per axis of model.lengths");
        geometry_ok = false;
    }
    for (int c : cfg.cells)
        if (c < 4) {
            e.push_back("model.cells: at least 4 cells per axis");
            geometry_ok = false;
            break;
        }

    const auto& ini = cfg.initial;
    const bool singular = singular_at_zero(cfg.family);
    if (!(ini.baseline_u >= 0.0)) e.push_back("initial.baseline_u: u0 must be nonnegative");
    if (!(ini.baseline_v >= 0.0)) e.push_back("initial.baseline_v: v0 must be nonnegative");
    if (!(ini.amplitude >= 0.0)) e.push_back("initial.amplitude: u0 must be nonnegative");
    if (!(ini.width > 0.0)) e.push_back("initial.width: must be positive");
    if (!ini.center.empty() && ini.center.size() != L.size())
        e.push_back("initial.center: needs one coordinate per axis");
    if (ini.kind != InitialSpec::Kind::File) {
        const bool u_zero = ini.baseline_u == 0.0 &&
                            (ini.kind == InitialSpec::Kind::Constant || ini.amplitude == 0.0);
        if (u_zero) e.push_back("initial: u0 must not vanish identically");
        if (ini.baseline_v == 0.0) {
            e.push_back(singular ? "initial.baseline_v: the " + family_kind(cfg.family) +
                                       " family is undefined at v = 0; v0 must be positive"
                                 : "initial: v0 must not vanish identically");
        }
    } else if (ini.path.empty()) {
        e.push_back("initial.path: required when initial.kind = \"file\"");
    } else if (geometry_ok) {
        try {
            const State s = read_snapshot(ini.path, cfg.grid());
            if (s.u.min() < 0.0 || s.v.min() < 0.0)
                e.push_back("initial.path: u0 and v0 must be nonnegative");
            if (s.u.max() == 0.0) e.push_back("initial.path: u0 must not vanish identically");
            if (s.v.max() == 0.0) e.push_back("initial.path: v0 must not vanish identically");
            if (singular && s.v.min() <= 0.0)
                e.push_back("initial.path: v0 has a zero cell but the " + family_kind(cfg.family) +
                            " family is undefined at v = 0");
        } catch (const std::exception& ex) {
            e.push_back(std::string("initial.path: ") + ex.what());
        }
    }

    try {
        cfg.step.validate();
    } catch (const std::exception& ex) {
        e.push_back(std::string("step: ") + ex.what());
    }

    if (!(cfg.horizon > 0.0)) e.push_back("run.horizon: must be positive");
    if (!(cfg.sample_every > 0.0)) e.push_back("run.sample_every: must be positive");
    for (double p : cfg.lp_exponents)
        if (!(p >= 1.0)) {
            e.push_back("run.lp: every exponent must be >= 1 (or inf)");
            break;
        }

    if (cfg.p.has_value() != cfg.q.has_value()) e.push_back("exponents: give both p and q, or neither");
    if (cfg.p && !(*cfg.p > 1.0)) e.push_back("exponents.p: must exceed 1");
    if (cfg.q && !(*cfg.q > 0.0)) e.push_back("exponents.q: must be positive");

    if (cfg.output_dir.empty()) e.push_back("output.dir: must not be empty");
    if (cfg.snapshots_every && !(*cfg.snapshots_every > 0.0))
        e.push_back("output.snapshots_every: must be positive");

    if (!(cfg.audit.v_min > 0.0) || !(cfg.audit.v_max > cfg.audit.v_min))
        e.push_back("audit: need 0 < v_min < v_max");
    if (cfg.audit.grid_points < 64) e.push_back("audit.grid_points: at least 64");
    return e;
}

std::string to_toml(const ExperimentConfig& cfg) {
    std::ostringstream os;
    auto num = [](double x) { return format_double(x); };
    auto inum = [](int x) { return std::to_string(x); };

    os << "[family]\n";
    os << "kind = " << quoted(family_kind(cfg.family)) << "\n";
    if (const auto* c = std::get_if<ConstantMotility>(&cfg.family)) {
        os << "gamma0 = " << num(c->gamma0) << "\nphi0 = " << num(c->phi0) << "\n";
    } else if (const auto* s = std::get_if<SingularMotility>(&cfg.family)) {
        os << "chi = " << num(s->chi) << "\n";
    } else if (const auto* a = std::get_if<AlgebraicMotility>(&cfg.family)) {
        os << "sigma = " << num(a->sigma) << "\nlambda = " << num(a->lambda)
           << "\nalpha = " << num(a->alpha) << "\n";
    } else if (const auto* t = std::get_if<TabulatedMotility>(&cfg.family)) {
        os << "v_table = " << array(t->nodes(), num) << "\n";
        os << "gamma_table = " << array(t->gamma_values(), num) << "\n";
        os << "phi_table = " << array(t->phi_values(), num) << "\n";
    }
    if (cfg.eta) os << "eta = " << num(*cfg.eta) << "\n";

    os << "\n[model]\n";
    os << "d = " << num(cfg.model.d) << "\n";
    os << "n_dim = " << cfg.model.n_dim << "\n";
    os << "lengths = " << array(cfg.model.domain_lengths, num) << "\n";
    os << "cells = " << array(cfg.cells, inum) << "\n";

    const auto& ini = cfg.initial;
    os << "\n[initial]\n";
    os << "kind = " << quoted(kind_name(ini.kind)) << "\n";
    os << "amplitude = " << num(ini.amplitude) << "\n";
    if (!ini.center.empty()) os << "center = " << array(ini.center, num) << "\n";
    os << "width = " << num(ini.width) << "\n";
    os << "baseline_u = " << num(ini.baseline_u) << "\n";
    os << "baseline_v = " << num(ini.baseline_v) << "\n";
    if (!ini.path.empty()) os << "path = " << quoted(ini.path) << "\n";

    os << "\n[step]\n";
    os << "cfl_safety = " << num(cfg.step.cfl_safety) << "\n";
    os << "dt_min = " << num(cfg.step.dt_min) << "\n";
    os << "dt_max = " << num(cfg.step.dt_max) << "\n";
    os << "u_blowup_threshold = " << num(cfg.step.u_blowup_threshold) << "\n";
    os << "v_floor = " << num(cfg.step.v_floor) << "\n";
    os << "gamma_floor = " << num(cfg.step.gamma_floor) << "\n";

    os << "\n[run]\n";
    os << "horizon = " << num(cfg.horizon) << "\n";
    os << "sample_every = " << num(cfg.sample_every) << "\n";
    os << "lp = " << array(cfg.lp_exponents, num) << "\n";
    os << "seed = " << cfg.seed << "\n";

    if (cfg.p && cfg.q) {
        os << "\n[exponents]\n";
        os << "p = " << num(*cfg.p) << "\nq = " << num(*cfg.q) << "\n";
    }

    os << "\n[output]\n";
    os << "dir = " << quoted(cfg.output_dir) << "\n";
    if (cfg.snapshots_every) os << "snapshots_every = " << num(*cfg.snapshots_every) << "\n";

    os << "\n[audit]\n";
    os << "v_min = " << num(cfg.audit.v_min) << "\n";
    os << "v_max = " << num(cfg.audit.v_max) << "\n";
    os << "grid_points = " << cfg.audit.grid_points << "\n";
    return os.str();
}

State make_initial_state(const ExperimentConfig& cfg) {
    const Grid g = cfg.grid();
    const auto& ini = cfg.initial;
    if (ini.kind == InitialSpec::Kind::File) return read_snapshot(ini.path, g);

    State s{ScalarField(g, ini.baseline_u), ScalarField(g, ini.baseline_v), 0.0};
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    if (ini.kind == InitialSpec::Kind::Gaussian) {
        std::vector<double> c = ini.center;
        if (c.empty())
            for (int a = 0; a < g.dim(); ++a) c.push_back(0.5 * g.length(a));
        const double inv = 1.0 / (2.0 * ini.width * ini.width);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                double r2 = std::pow(g.center(0, i) - c[0], 2);
                if (g.dim() == 2) r2 += std::pow(g.center(1, j) - c[1], 2);
                s.u.at(i, j) += ini.amplitude * std::exp(-r2 * inv);
            }
        }
    } else if (ini.kind == InitialSpec::Kind::Random) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (double& x : s.u.values) x += ini.amplitude * unit(rng);
    }
    return s;
}

}  // namespace kemosim
