#pragma once

#include <nlohmann/json.hpp>

#include "nedet/network.hpp"

namespace nedet {

nlohmann::json to_json(const NetworkConfig& config);
NetworkConfig network_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Unit& unit);
Unit unit_from_json(const nlohmann::json& j);

/// Full network state. The presentation trace is optional because the
/// experiment checkpoint stores it alongside its own records.
nlohmann::json to_json(const NetworkState& net, bool include_trace = true);
/// Throws ParseError on malformed or inconsistent input.
NetworkState network_from_json(const nlohmann::json& j);

}  // namespace nedet
