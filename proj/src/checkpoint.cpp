#include "nedet/checkpoint.hpp"

#include "nedet/error.hpp"
#include "nedet/trace.hpp"

namespace nedet {

using nlohmann::json;

namespace {

json address_list(const std::set<Address>& addresses)
{
    json out = json::array();
    for (const Address& a : addresses) {
        out.push_back(to_string(a));
    }
    return out;
}

std::set<Address> address_set(const json& j)
{
    std::set<Address> out;
    for (const auto& item : j) {
        out.insert(parse_address(item.get<std::string>()));
    }
    return out;
}

json to_json(const LearningMode& mode)
{
    if (const auto* t = std::get_if<TeacherMode>(&mode)) {
        return json{{"kind", "teacher"}, {"delta", t->delta}};
    }
    const auto& s = std::get<SelfLearningMode>(mode);
    return json{{"kind", "self"}, {"c", s.c}, {"q", s.q}};
}

LearningMode mode_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "teacher") {
        return TeacherMode{j.at("delta").get<double>()};
    }
    if (kind == "self") {
        return SelfLearningMode{j.at("c").get<double>(), j.at("q").get<double>()};
    }
    throw Error(ErrorCode::ParseError, "unknown learning mode '" + kind + "'");
}

std::string rule_name(ComparisonRule rule)
{
    return rule == ComparisonRule::AtLeast ? "ge" : "gt";
}

ComparisonRule parse_rule(const std::string& text)
{
    if (text == "ge") return ComparisonRule::AtLeast;
    if (text == "gt") return ComparisonRule::Greater;
    throw Error(ErrorCode::ParseError, "unknown comparison rule '" + text + "'");
}

json to_json(const ModuleState& module)
{
    json units = json::array();
    for (const auto& u : module.units) {
        units.push_back(to_json(u));
    }
    return json{{"id", module.module_id}, {"units", units}};
}

ModuleState module_from_json(const json& j)
{
    ModuleState module;
    module.module_id = j.at("id").get<std::uint32_t>();
    for (const auto& u : j.at("units")) {
        module.units.push_back(unit_from_json(u));
        if (module.units.back().core.own_address.module_id != module.module_id) {
            throw Error(ErrorCode::ParseError, "unit " + to_string(module.units.back().core.own_address) +
                                                   " filed under module " + std::to_string(module.module_id));
        }
    }
    return module;
}

}  // namespace

json to_json(const NetworkConfig& config)
{
    return json{{"theta", config.corridor.theta},
                {"epsilon_level", config.corridor.epsilon_level},
                {"learning", to_json(config.learning)},
                {"rule", rule_name(config.rule)},
                {"y_max_policy", config.y_max_policy == YMaxPolicy::Fixed ? "fixed" : "corridor"},
                {"y_max_fixed", config.y_max_fixed},
                {"ps_module_sizes", config.ps_module_sizes}};
}

NetworkConfig network_config_from_json(const json& j)
{
    NetworkConfig c;
    c.corridor.theta = j.at("theta").get<double>();
    c.corridor.epsilon_level = j.at("epsilon_level").get<double>();
    c.learning = mode_from_json(j.at("learning"));
    c.rule = parse_rule(j.at("rule").get<std::string>());
    c.y_max_policy = j.at("y_max_policy").get<std::string>() == "fixed" ? YMaxPolicy::Fixed
                                                                        : YMaxPolicy::CorridorCeiling;
    c.y_max_fixed = j.at("y_max_fixed").get<double>();
    c.ps_module_sizes = j.at("ps_module_sizes").get<std::vector<std::size_t>>();
    return c;
}

json to_json(const Unit& unit)
{
    json j{{"address", to_string(unit.core.own_address)},
           {"state", std::string(to_string(unit.life.state))}};
    if (unit.life.state == LifecycleState::Free) {
        return j;
    }
    json bands = json::object();
    for (const auto& [a, b] : unit.core.bands) {
        bands[to_string(a)] = json::array({b.min, b.opt, b.max, b.count});
    }
    json counts = json::object();
    for (const auto& [a, l] : unit.table.counts()) {
        counts[to_string(a)] = l;
    }
    j["teacher"] = unit.life.teacher ? json(to_string(*unit.life.teacher)) : json(nullptr);
    j["partners"] = address_list(unit.partners);
    j["field"] = address_list(unit.core.receptive_field);
    j["concept"] = address_list(unit.core.concept_set);
    j["bands"] = bands;
    j["g0"] = unit.core.g0;
    j["g_star"] = unit.core.g_star;
    j["y_max"] = unit.core.y_max;
    j["rule"] = rule_name(unit.core.rule);
    j["cycles"] = unit.table.cycles();
    j["counts"] = counts;
    j["learning"] = to_json(unit.table.mode());
    return j;
}

Unit unit_from_json(const json& j)
{
    Unit unit;
    unit.core.own_address = parse_address(j.at("address").get<std::string>());
    unit.life.state = parse_lifecycle(j.at("state").get<std::string>());
    if (unit.life.state == LifecycleState::Free) {
        return unit;
    }
    if (!j.at("teacher").is_null()) {
        unit.life.teacher = parse_address(j.at("teacher").get<std::string>());
    }
    if (unit.life.teacher.has_value() != (unit.life.state == LifecycleState::Bound)) {
        throw Error(ErrorCode::ParseError, to_string(unit.core.own_address) + ": teacher/state mismatch");
    }
    unit.partners = address_set(j.at("partners"));
    unit.core.receptive_field = address_set(j.at("field"));
    unit.core.concept_set = address_set(j.at("concept"));
    for (const auto& [a, b] : j.at("bands").items()) {
        unit.core.bands[parse_address(a)] =
            LevelBand{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                      b.at(3).get<std::uint64_t>()};
    }
    unit.core.g0 = j.at("g0").get<double>();
    unit.core.g_star = j.at("g_star").get<double>();
    unit.core.y_max = j.at("y_max").get<double>();
    unit.core.rule = parse_rule(j.at("rule").get<std::string>());
    std::map<Address, std::uint64_t> counts;
    for (const auto& [a, l] : j.at("counts").items()) {
        counts[parse_address(a)] = l.get<std::uint64_t>();
    }
    unit.table = MembershipTable::from_counts(std::move(counts), j.at("cycles").get<std::uint64_t>(),
                                              mode_from_json(j.at("learning")));
    try {
        validate(unit.core);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.detail());
    }
    return unit;
}

json to_json(const NetworkState& net, bool include_trace)
{
    json modules = json::array();
    for (const auto& m : net.ps_modules) {
        modules.push_back(to_json(m));
    }
    json j{{"config", to_json(net.config)},
           {"ps_modules", modules},
           {"rs_module", to_json(net.rs_module)},
           {"next_cycle", net.next_cycle}};
    if (include_trace) {
        json steps = json::array();
        for (const auto& s : net.trace) {
            steps.push_back(to_json(s));
        }
        j["trace"] = steps;
    }
    return j;
}

NetworkState network_from_json(const json& j)
{
    try {
        NetworkState net;
        net.config = network_config_from_json(j.at("config"));
        validate(net.config);
        for (const auto& m : j.at("ps_modules")) {
            net.ps_modules.push_back(module_from_json(m));
        }
        net.rs_module = module_from_json(j.at("rs_module"));
        net.next_cycle = j.at("next_cycle").get<std::uint64_t>();
        if (j.contains("trace")) {
            for (const auto& s : j.at("trace")) {
                net.trace.push_back(step_from_json(s));
            }
        }
        return net;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("checkpoint: ") + e.what());
    }
}

}  // namespace nedet
