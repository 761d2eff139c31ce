#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kemosim/config.hpp"
#include "kemosim/experiment.hpp"

using namespace kemosim;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "kemosim_test_cli";

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kRoot);
    const auto p = kRoot / (name + ".toml");
    std::ofstream(p) << text;
    return p;
}

int kemosim_cli(const std::string& args) {
    const std::string cmd = std::string(KEMOSIM_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string singular(double chi, const std::string& extra = "") {
    std::ostringstream os;
    os << "[family]\nkind = \"singular\"\nchi = " << chi << "\n"
       << "[model]\nlengths = [4.0, 4.0]\ncells = [16, 16]\n"
       << "[run]\nhorizon = 1.0\nsample_every = 0.25\n"
       << extra;
    return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("audit exit codes and report") {
    const auto out = kRoot / "audit_ok";
    CHECK(kemosim_cli("audit -c " + write_config("a1", singular(0.5)).string() + " --out " + out.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(out / "audit.json"));
    CHECK(j["inf_F"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(j["h3_ok"].get<bool>());
    CHECK(j["h3_margin"].get<double>() == doctest::Approx(3.0));
    CHECK(j["verdict"] == "pass");

    const auto out2 = kRoot / "audit_fail";
    CHECK(kemosim_cli("audit -c " + write_config("a2", singular(1.5)).string() + " --out " + out2.string()) == 4);
    const auto j2 = nlohmann::json::parse(slurp(out2 / "audit.json"));
    CHECK(j2["inf_F"].get<double>() == doctest::Approx(1.0 / 2.25).epsilon(1e-12));

    // inf F = 2 = N/2 for N = 4: the strict inequality fails
    const auto alg = write_config("a3", R"(
[family]
kind = "algebraic"
sigma = 1.0
lambda = 1.0
alpha = 0.5
[model]
n_dim = 4
lengths = [4.0, 4.0]
cells = [16, 16]
)");
    const auto out3 = kRoot / "audit_alg";
    CHECK(kemosim_cli("audit -c " + alg.string() + " --out " + out3.string()) == 4);
    const auto j3 = nlohmann::json::parse(slurp(out3 / "audit.json"));
    CHECK(j3["closed_form"]["inf_F_closed"].get<double>() == 2.0);
    CHECK_FALSE(j3["closed_form"]["bounded_claim"].get<bool>());
}

TEST_CASE("config errors exit 3") {
    const auto bad = write_config("bad", R"(
[family]
kind = "algebraic"
alpha = 1.2
[model]
lengths = [1.0]
cells = [8]
)");
    CHECK(kemosim_cli("audit -c " + bad.string()) == 3);
    CHECK(kemosim_cli("run -c " + bad.string()) == 3);
    CHECK(kemosim_cli("sweep -c " + write_config("ok", singular(0.5)).string() + " --axis chi=1:2") == 3);
    CHECK(kemosim_cli("sweep -c " + write_config("ok", singular(0.5)).string() + " --axis nonsense=1:2:2 --out " +
                      (kRoot / "sw_bad").string()) == 3);
    CHECK(kemosim_cli("run -c /nonexistent.toml") != 0);
    CHECK(kemosim_cli("") != 0);
}

TEST_CASE("run: steady state gives constant rows") {
    const auto cfg = write_config("steady", singular(0.5, "[initial]\nkind = \"constant\"\n"));
    const auto out = kRoot / "steady";
    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + out.string()) == 0);
    const auto rows = lines(slurp(out / "series.csv"));
    REQUIRE(rows.size() == 6);  // header + t = 0, 0.25, 0.5, 0.75, 1
    CHECK(rows[0] == "t,mass_u,int_v,min_v,min_gamma,sup_u,sup_grad_v,lp_u_p1,lp_u_p2,W,ineq_residual,identity_residual");
    auto tail = [](const std::string& r) { return r.substr(r.find(',')); };
    for (std::size_t k = 2; k < rows.size(); ++k) CHECK(tail(rows[k]) == tail(rows[1]));
    CHECK(fs::exists(out / "effective_config.toml"));
}

TEST_CASE("run: blow-up threshold exits 2 immediately") {
    const auto cfg = write_config("blow", singular(0.5, "[initial]\nkind = \"constant\"\nbaseline_u = 2.0\n[step]\nu_blowup_threshold = 1.0\n"));
    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + (kRoot / "blow").string()) == 2);
}

TEST_CASE("run: snapshots and reproducibility") {
    const auto cfg = write_config("snap", singular(0.5, "[initial]\nkind = \"random\"\namplitude = 0.5\n[output]\nsnapshots_every = 0.5\n"));
    const auto a = kRoot / "rep_a", b = kRoot / "rep_b", c = kRoot / "rep_c";
    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + a.string()) == 0);
    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + b.string() + " --threads 4") == 0);
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    CHECK(fs::exists(a / "snap_0.000000.csv"));
    CHECK(fs::exists(a / "snap_0.500000.csv"));
    CHECK(fs::exists(a / "snap_1.000000.csv"));
    const auto snap = lines(slurp(a / "snap_0.500000.csv"));
    CHECK(snap[0] == "x,y,u,v");
    CHECK(snap.size() == 1 + 16 * 16);

    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + c.string() + " --seed 17") == 0);
    CHECK(slurp(a / "series.csv") != slurp(c / "series.csv"));
}

TEST_CASE("effective config round trips") {
    const auto path = write_config("rt", singular(0.7, "[initial]\namplitude = 3.0\n[exponents]\np = 1.2\nq = 0.05\n"));
    const auto cfg = parse_config(path);
    const auto out = kRoot / "rt_out";
    CHECK(cmd_run(cfg, out) == 0);
    CHECK(parse_config(out / "effective_config.toml") == cfg);
}

TEST_CASE("sweep: one row per point, written as points finish") {
    const auto cfg = write_config("sweep", singular(0.3));
    const auto out = kRoot / "sweep";
    CHECK(kemosim_cli("sweep -c " + cfg.string() + " --axis chi=0.3:0.9:3 --threads 3 --out " + out.string()) == 0);
    const auto rows = lines(slurp(out / "sweep.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "index,chi,audit,inf_F,status,final_sup_u,min_v,regime");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].find(",pass,") != std::string::npos);
        CHECK(rows[k].find(",Completed,") != std::string::npos);
    }
    for (int k = 0; k < 3; ++k) CHECK(fs::exists(out / ("point_" + std::to_string(k)) / "series.csv"));
}

TEST_CASE("sweep: empty axis list matches a plain run at full resolution") {
    const auto cfg = write_config("single", singular(0.5, "[initial]\nkind = \"random\"\n"));
    const auto s = kRoot / "single_sweep", r = kRoot / "single_run";
    CHECK(kemosim_cli("sweep -c " + cfg.string() + " --full-resolution --out " + s.string()) == 0);
    CHECK(kemosim_cli("run -c " + cfg.string() + " --out " + r.string()) == 0);
    CHECK(lines(slurp(s / "sweep.csv")).size() == 2);
    CHECK(slurp(s / "point_0" / "series.csv") == slurp(r / "series.csv"));
}

TEST_CASE("sweep: results do not depend on the thread count") {
    const auto cfg = write_config("threads", singular(0.5, "[initial]\nkind = \"random\"\n"));
    const auto one = kRoot / "t1", many = kRoot / "t4";
    CHECK(kemosim_cli("sweep -c " + cfg.string() + " --axis chi=0.2:1.0:4 --threads 1 --out " + one.string()) == 0);
    CHECK(kemosim_cli("sweep -c " + cfg.string() + " --axis chi=0.2:1.0:4 --threads 4 --out " + many.string()) == 0);
    for (int k = 0; k < 4; ++k) {
        const auto p = "point_" + std::to_string(k);
        CHECK(slurp(one / p / "series.csv") == slurp(many / p / "series.csv"));
    }
}

TEST_CASE("parse_axis and with_parameter") {
    const auto ax = parse_axis("chi=0.3:0.9:3");
    CHECK(ax.name == "chi");
    REQUIRE(ax.values.size() == 3);
    CHECK(ax.values[1] == doctest::Approx(0.6));
    CHECK(parse_axis("d=2:5:1").values == std::vector<double>{2.0});
    CHECK_THROWS(parse_axis("chi"));
    CHECK_THROWS(parse_axis("chi=a:b:c"));
    CHECK_THROWS(parse_axis("chi=1:2:0"));

    ExperimentConfig cfg;
    CHECK(std::get<SingularMotility>(with_parameter(cfg, "chi", 2.0).family).chi == 2.0);
    CHECK(with_parameter(cfg, "d", 3.0).model.d == 3.0);
    CHECK_THROWS(with_parameter(cfg, "sigma", 1.0));
    CHECK_THROWS(with_parameter(cfg, "unknown", 1.0));
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(RunStatus::Completed) == 0);
    CHECK(exit_code_for(RunStatus::BlowUpSuspected) == 2);
    CHECK(exit_code_for(RunStatus::PositivityLost) == 5);
    CHECK(exit_code_for(RunStatus::DtUnderflow) == 5);
}

}  // TEST_SUITE
