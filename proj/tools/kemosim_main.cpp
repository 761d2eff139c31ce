// kemosim: audit motility hypotheses, run and sweep Keller-Segel simulations.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kemosim/errors.hpp"
#include "kemosim/experiment.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<std::string> axes;
    bool full_resolution = false;
};

}  // namespace

int main(int argc, char** argv) {
    using namespace kemosim;

    CLI::App app{"kemosim - Keller-Segel chemotaxis with signal-dependent motilities"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config, "TOML experiment file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory (overrides [output] dir)");
        sub->add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& s) {
                opt.seed = s;
                opt.seed_given = true;
            },
            "seed for random initial data");
    };

    auto* audit_cmd = app.add_subcommand("audit", "check the structural hypotheses for the configured family");
    auto* run_cmd = app.add_subcommand("run", "simulate and write series.csv and snapshots");
    auto* sweep_cmd = app.add_subcommand("sweep", "run a grid of parameter points");
    add_common(audit_cmd);
    add_common(run_cmd);
    add_common(sweep_cmd);
    sweep_cmd->add_option("--axis", opt.axes, "name=start:stop:count (repeatable)");
    sweep_cmd->add_flag("--full-resolution", opt.full_resolution, "do not halve the grid per point");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = parse_config(opt.config);
        if (!opt.out.empty()) cfg.output_dir = opt.out;
        if (opt.seed_given) cfg.seed = opt.seed;
        const std::filesystem::path out_dir(cfg.output_dir);

        if (audit_cmd->parsed()) return cmd_audit(cfg, out_dir);
        if (run_cmd->parsed()) return cmd_run(cfg, out_dir);

        std::vector<SweepAxis> axes;
        for (const auto& a : opt.axes) axes.push_back(parse_axis(a));
        SweepOptions sopts;
        sopts.threads = opt.threads;
        sopts.full_resolution = opt.full_resolution;
        return cmd_sweep(cfg, axes, out_dir, sopts);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return exit_code::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::error;
    }
}
