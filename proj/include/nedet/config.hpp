#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nedet/network.hpp"

namespace nedet {

enum class RunMode { Train, Recall, Inspect };

std::string_view to_string(RunMode mode);

/// Every free parameter of an experiment. Defaults: theta 0.9, teacher mode
/// with delta 0, self-learning c 0.5 / q 0.7, >= comparison, one PS module of
/// 64 detectors, one epoch, no shuffling.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    double theta = 0.9;
    double epsilon_level = 1e-6;
    std::string learning = "teacher";  // "teacher" | "self"
    double delta = 0.0;
    double c = 0.5;
    double q = 0.7;
    bool strict_gt = false;
    std::string y_max = "corridor";  // "corridor" | "fixed"
    double y_max_value = 1.0;
    std::vector<std::size_t> module_sizes{64};
    std::size_t epochs = 1;
    bool shuffle = false;
    RunMode mode = RunMode::Train;

    NetworkConfig network() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws InvalidConfig with the offending field name.
void validate(const ExperimentConfig& config);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a JSON config file. Missing keys keep their defaults; unknown keys
/// are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace nedet
