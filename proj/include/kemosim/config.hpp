#pragma once

/// @file config.hpp
/// @brief TOML experiment configuration: parsing with full violation
/// reporting, defaults, and canonical re-emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kemosim/field.hpp"
#include "kemosim/motility.hpp"
#include "kemosim/stepper.hpp"

namespace kemosim {

struct InitialSpec {
    enum class Kind { Constant, Gaussian, Random, File };

    Kind kind = Kind::Gaussian;
    double amplitude = 1.0;
    std::vector<double> center;  ///< empty means domain centre
    double width = 1.0;
    double baseline_u = 1.0;
    double baseline_v = 1.0;
    std::string path;  ///< snapshot CSV for Kind::File

    bool operator==(const InitialSpec&) const = default;
};

struct AuditRange {
    double v_min = 1e-3;
    double v_max = 1e6;
    int grid_points = 2048;

    bool operator==(const AuditRange&) const = default;
};

struct ExperimentConfig {
    MotilityFamily family = SingularMotility{0.5};
    std::optional<double> eta;  ///< lower bound for v used by closed-form thresholds

    ModelParams model{1.0, 2, {8.0, 8.0}};
    std::vector<int> cells{64, 64};

    InitialSpec initial;
    StepControl step;

    double horizon = 10.0;
    double sample_every = 0.5;
    std::vector<double> lp_exponents{2.0, 4.0};

    std::optional<double> p;
    std::optional<double> q;

    std::string output_dir = "out";
    std::optional<double> snapshots_every;

    AuditRange audit;
    std::uint64_t seed = 0;

    Grid grid() const { return Grid(model.domain_lengths, cells); }
    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses TOML text. Relative initial-data paths resolve against `base_dir`.
/// Throws ConfigError listing every violation found.
ExperimentConfig parse_config_string(const std::string& text,
                                     const std::filesystem::path& base_dir = {});
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Checks semantic constraints; returns one message per violation.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Canonical TOML with every effective value spelled out; parse_config_string
/// of the result yields an equal config.
std::string to_toml(const ExperimentConfig& cfg);

/// Builds (u0, v0) at t = 0.
State make_initial_state(const ExperimentConfig& cfg);

}  // namespace kemosim
