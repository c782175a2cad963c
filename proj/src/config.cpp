#include "nedet/config.hpp"

#include <fstream>
#include <set>

#include "nedet/error.hpp"

namespace nedet {

std::string_view to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::Train: return "train";
    case RunMode::Recall: return "recall";
    case RunMode::Inspect: return "inspect";
    }
    return "train";
}

namespace {

RunMode parse_run_mode(const std::string& text)
{
    if (text == "train") return RunMode::Train;
    if (text == "recall") return RunMode::Recall;
    if (text == "inspect") return RunMode::Inspect;
    throw Error(ErrorCode::InvalidConfig, "mode: expected train, recall or inspect, got '" + text + "'");
}

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out)
{
    auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + ": " + e.what());
    }
}

}  // namespace

NetworkConfig ExperimentConfig::network() const
{
    NetworkConfig net;
    net.corridor = CorridorParams{theta, epsilon_level};
    if (learning == "self") {
        net.learning = SelfLearningMode{c, q};
    } else {
        net.learning = TeacherMode{delta};
    }
    net.rule = strict_gt ? ComparisonRule::Greater : ComparisonRule::AtLeast;
    net.y_max_policy = y_max == "fixed" ? YMaxPolicy::Fixed : YMaxPolicy::CorridorCeiling;
    net.y_max_fixed = y_max_value;
    net.ps_module_sizes = module_sizes;
    return net;
}

void validate(const ExperimentConfig& config)
{
    if (config.learning != "teacher" && config.learning != "self") {
        throw Error(ErrorCode::InvalidConfig, "learning: expected 'teacher' or 'self'");
    }
    if (config.y_max != "corridor" && config.y_max != "fixed") {
        throw Error(ErrorCode::InvalidConfig, "y_max: expected 'corridor' or 'fixed'");
    }
    if (!(config.delta >= 0.0 && config.delta < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "delta must lie in [0, 1)");
    }
    if (!(config.c > 0.0 && config.c < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "c must lie in (0, 1)");
    }
    if (!(config.q > 0.0 && config.q < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "q must lie in (0, 1)");
    }
    for (std::size_t size : config.module_sizes) {
        if (size == 0) {
            throw Error(ErrorCode::InvalidConfig, "module_sizes: modules need at least one detector");
        }
    }
    validate(config.network());
}

ExperimentConfig config_from_json(const nlohmann::json& j)
{
    static const std::set<std::string> known = {
        "seed", "theta", "epsilon_level", "learning", "delta", "c", "q", "strict_gt",
        "y_max", "y_max_value", "module_sizes", "epochs", "shuffle", "mode"};
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
        }
    }

    ExperimentConfig config;
    read_field(j, "seed", config.seed);
    read_field(j, "theta", config.theta);
    read_field(j, "epsilon_level", config.epsilon_level);
    read_field(j, "learning", config.learning);
    read_field(j, "delta", config.delta);
    read_field(j, "c", config.c);
    read_field(j, "q", config.q);
    read_field(j, "strict_gt", config.strict_gt);
    read_field(j, "y_max", config.y_max);
    read_field(j, "y_max_value", config.y_max_value);
    read_field(j, "module_sizes", config.module_sizes);
    read_field(j, "epochs", config.epochs);
    read_field(j, "shuffle", config.shuffle);
    std::string mode = "train";
    read_field(j, "mode", mode);
    config.mode = parse_run_mode(mode);
    validate(config);
    return config;
}

nlohmann::json to_json(const ExperimentConfig& config)
{
    return nlohmann::json{
        {"seed", config.seed},
        {"theta", config.theta},
        {"epsilon_level", config.epsilon_level},
        {"learning", config.learning},
        {"delta", config.delta},
        {"c", config.c},
        {"q", config.q},
        {"strict_gt", config.strict_gt},
        {"y_max", config.y_max},
        {"y_max_value", config.y_max_value},
        {"module_sizes", config.module_sizes},
        {"epochs", config.epochs},
        {"shuffle", config.shuffle},
        {"mode", std::string(to_string(config.mode))},
    };
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace nedet
