#include "nedet/network.hpp"

#include <algorithm>

#include "nedet/error.hpp"

namespace nedet {

std::string_view to_string(LifecycleState state)
{
    switch (state) {
    case LifecycleState::Free: return "free";
    case LifecycleState::Identifier: return "identifier";
    case LifecycleState::Bound: return "bound";
    }
    return "free";
}

LifecycleState parse_lifecycle(std::string_view text)
{
    if (text == "free") return LifecycleState::Free;
    if (text == "identifier") return LifecycleState::Identifier;
    if (text == "bound") return LifecycleState::Bound;
    throw Error(ErrorCode::ParseError, "unknown lifecycle state '" + std::string(text) + "'");
}

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::NoveltyFired: return "novelty";
    case EventKind::Captured: return "captured";
    case EventKind::Bound: return "bound";
    case EventKind::Corrected: return "corrected";
    case EventKind::Conflict: return "conflict";
    case EventKind::AssociativeUnsupported: return "associative_unsupported";
    }
    return "novelty";
}

EventKind parse_event_kind(std::string_view text)
{
    for (auto kind : {EventKind::NoveltyFired, EventKind::Captured, EventKind::Bound,
                      EventKind::Corrected, EventKind::Conflict,
                      EventKind::AssociativeUnsupported}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown event kind '" + std::string(text) + "'");
}

std::size_t ModuleState::free_count() const
{
    return static_cast<std::size_t>(std::count_if(units.begin(), units.end(), [](const Unit& u) {
        return u.life.state == LifecycleState::Free;
    }));
}

Unit* ModuleState::find(Address address)
{
    if (address.module_id != module_id) {
        return nullptr;
    }
    auto it = std::lower_bound(units.begin(), units.end(), address, [](const Unit& u, Address a) {
        return u.core.own_address < a;
    });
    return it != units.end() && it->core.own_address == address ? &*it : nullptr;
}

const Unit* ModuleState::find(Address address) const
{
    return const_cast<ModuleState*>(this)->find(address);
}

namespace {

Unit free_unit(Address address)
{
    Unit unit;
    unit.core.own_address = address;
    return unit;
}

}  // namespace

ModuleState make_module(std::uint32_t module_id, std::size_t size)
{
    ModuleState module{module_id, {}};
    module.units.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        module.units.push_back(free_unit({module_id, static_cast<std::uint32_t>(i)}));
    }
    return module;
}

void validate(const NetworkConfig& config)
{
    validate(config.corridor);
    validate(config.learning);
    if (config.y_max_policy == YMaxPolicy::Fixed && !(config.y_max_fixed > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "fixed y_max must be positive");
    }
    if (config.ps_module_sizes.empty()) {
        throw Error(ErrorCode::InvalidConfig, "at least one PS module is required");
    }
}

NetworkState make_network(const NetworkConfig& config)
{
    validate(config);
    NetworkState net;
    net.config = config;
    std::uint32_t id = kReceptorModule + 1;
    for (std::size_t size : config.ps_module_sizes) {
        net.ps_modules.push_back(make_module(id++, size));
    }
    net.rs_module = make_module(id, 0);
    return net;
}

Address add_label(NetworkState& net)
{
    ModuleState& rs = net.rs_module;
    const Address address{rs.module_id, static_cast<std::uint32_t>(rs.units.size())};
    Unit unit = free_unit(address);
    unit.core.receptive_field = {address};
    unit.core.concept_set = {address};
    unit.core.bands[address] = LevelBand{1.0, 1.0, 1.0, 1};
    unit.core.g0 = 0.0;
    unit.core.g_star = 1.0;
    unit.core.y_max = 1.0;
    unit.table = MembershipTable({address}, TeacherMode{});
    unit.life.state = LifecycleState::Identifier;
    rs.units.push_back(std::move(unit));
    return address;
}

void refresh_corridor(Unit& unit, const NetworkConfig& config)
{
    auto concept_set = extract_concept(unit.table);
    if (concept_set.empty()) {
        return;
    }
    const Thresholds t = recompute_thresholds(unit.core.bands, concept_set, config.corridor);
    unit.core.concept_set = std::move(concept_set);
    unit.core.g0 = t.g0;
    unit.core.g_star = t.g_star;
    unit.core.rule = config.rule;
    unit.core.y_max = config.y_max_policy == YMaxPolicy::Fixed
                          ? config.y_max_fixed
                          : corridor_ceiling(unit.core.bands, unit.core.concept_set, t.g_star);
}

void learn(Unit& unit, const SignalVector& inputs, const NetworkConfig& config)
{
    if (std::holds_alternative<TeacherMode>(unit.table.mode())) {
        teacher_update(unit.table, unit.core.bands, inputs, true, config.corridor);
    } else {
        self_update(unit.table, unit.core.bands, inputs, config.corridor);
    }
    refresh_corridor(unit, config);
}

namespace {

Event corridor_event(EventKind kind, std::uint32_t module_id, const Unit& unit)
{
    Event e{kind, module_id, unit.core.own_address, std::nullopt};
    e.concept_size = unit.core.concept_set.size();
    e.g0 = unit.core.g0;
    e.g_star = unit.core.g_star;
    return e;
}

Signal emitted(const Unit& unit, const SignalVector& inputs)
{
    const auto outcome = detector_step(unit.core, inputs);
    const auto& fired = std::get<Fired>(outcome);
    return Signal{unit.core.own_address, normalize(fired.raw_level, unit.core.y_max)};
}

Unit& unit_at(ModuleState& module, Address address)
{
    Unit* unit = module.find(address);
    if (unit == nullptr) {
        throw Error(ErrorCode::InvalidDetector, "no detector at " + to_string(address));
    }
    return *unit;
}

ModuleState* ps_module_of(NetworkState& net, Address address)
{
    for (auto& module : net.ps_modules) {
        if (module.module_id == address.module_id) {
            return &module;
        }
    }
    return nullptr;
}

}  // namespace

Address capture(ModuleState& module, const SignalVector& inputs, const NetworkConfig& config)
{
    if (inputs.empty()) {
        throw Error(ErrorCode::EmptyConcept, "capture needs a non-empty input vector");
    }
    auto it = std::find_if(module.units.begin(), module.units.end(), [](const Unit& u) {
        return u.life.state == LifecycleState::Free;
    });
    if (it == module.units.end()) {
        throw Error(ErrorCode::NoFreeDetector,
                    "module m" + std::to_string(module.module_id) + " has no free detector");
    }

    Unit& unit = *it;
    const auto addresses = inputs.addresses();
    unit.core.receptive_field = addresses;
    unit.core.concept_set = addresses;
    unit.core.bands.clear();
    for (const auto& [address, level] : inputs) {
        unit.core.bands.emplace(address, update_band(std::nullopt, level));
    }
    unit.table = MembershipTable(addresses, config.learning);
    unit.table.record(inputs);
    unit.life = Lifecycle{LifecycleState::Identifier, std::nullopt};
    unit.partners.clear();
    refresh_corridor(unit, config);
    return unit.core.own_address;
}

bool bind(NetworkState& net, Address ps_address, Address rs_address)
{
    ModuleState* module = ps_module_of(net, ps_address);
    if (module == nullptr) {
        throw Error(ErrorCode::InvalidDetector, to_string(ps_address) + " is not a PS detector");
    }
    Unit& ps = unit_at(*module, ps_address);
    Unit* rs = net.rs_module.find(rs_address);
    if (rs == nullptr) {
        throw Error(ErrorCode::UnknownLabel, to_string(rs_address) + " is not an RS label");
    }
    if (ps.life.state == LifecycleState::Free) {
        throw Error(ErrorCode::InvalidDetector, to_string(ps_address) + " is free and cannot bind");
    }
    if (ps.life.state == LifecycleState::Bound) {
        if (ps.life.teacher == rs_address) {
            return false;
        }
        throw Error(ErrorCode::AlreadyBound, to_string(ps_address) + " is bound to " +
                                                 to_string(*ps.life.teacher));
    }
    ps.life = Lifecycle{LifecycleState::Bound, rs_address};
    ps.partners.insert(rs_address);
    rs->partners.insert(ps_address);
    return true;
}

namespace {

// Conflict resolution. If a pre-excited detector already holds exactly this
// input under this teacher, it is corrected instead of capturing a duplicate.
const Unit* existing_identifier(const ModuleState& module, const ModuleVerdict& verdict,
                                const SignalVector& inputs, Address teacher)
{
    const auto addresses = inputs.addresses();
    for (const Address& loser : verdict.pre_excited) {
        const Unit* unit = module.find(loser);
        if (unit != nullptr && unit->life.teacher == teacher && unit->core.concept_set == addresses) {
            return unit;
        }
    }
    return nullptr;
}

void capture_and_bind(NetworkState& net, ModuleState& module, const SignalVector& inputs,
                      std::optional<Address> teacher, PresentationStep& step)
{
    const Address fresh = capture(module, inputs, net.config);
    Unit& unit = unit_at(module, fresh);
    step.events.push_back(corridor_event(EventKind::Captured, module.module_id, unit));
    if (teacher && bind(net, fresh, *teacher)) {
        step.events.push_back({EventKind::Bound, module.module_id, fresh, *teacher});
    }
    step.winners[module.module_id] = emitted(unit, inputs);
}

void train_module(NetworkState& net, ModuleState& module, const SignalVector& inputs,
                  std::optional<Address> teacher, PresentationStep& step)
{
    const auto verdict = module_step(module.units, inputs, &Unit::core);
    const std::uint32_t id = module.module_id;

    if (verdict.novelty) {
        step.events.push_back({EventKind::NoveltyFired, id, std::nullopt, std::nullopt});
        capture_and_bind(net, module, inputs, teacher, step);
        return;
    }
    if (!verdict.winner) {
        return;
    }

    const Address winner = verdict.winner->address;
    Unit& unit = unit_at(module, winner);
    const bool self_learning = std::holds_alternative<SelfLearningMode>(net.config.learning);

    if (!teacher) {
        step.winners[id] = *verdict.winner;
        if (self_learning) {
            learn(unit, inputs, net.config);
            step.events.push_back(corridor_event(EventKind::Corrected, id, unit));
        }
        return;
    }

    switch (unit.life.state) {
    case LifecycleState::Bound:
        if (unit.life.teacher == *teacher) {
            step.winners[id] = *verdict.winner;
            learn(unit, inputs, net.config);
            step.events.push_back(corridor_event(EventKind::Corrected, id, unit));
            return;
        }
        // The winner is inhibited for this cycle; its binding is untouched.
        step.events.push_back({EventKind::Conflict, id, winner, *teacher});
        if (const Unit* prior = existing_identifier(module, verdict, inputs, *teacher)) {
            Unit& resolved = unit_at(module, prior->core.own_address);
            const auto raw = std::find_if(verdict.fired.begin(), verdict.fired.end(),
                                          [&](const Contestant& c) {
                                              return c.address == resolved.core.own_address;
                                          });
            step.winners[id] =
                Signal{resolved.core.own_address, normalize(raw->raw_level, resolved.core.y_max)};
            learn(resolved, inputs, net.config);
            step.events.push_back(corridor_event(EventKind::Corrected, id, resolved));
            return;
        }
        capture_and_bind(net, module, inputs, teacher, step);
        return;
    case LifecycleState::Identifier:
        step.winners[id] = *verdict.winner;
        if (bind(net, winner, *teacher)) {
            step.events.push_back({EventKind::Bound, id, winner, *teacher});
        }
        return;
    case LifecycleState::Free:
        break;
    }
    throw Error(ErrorCode::InvalidDetector, "free detector " + to_string(winner) + " fired");
}

}  // namespace

PresentationStep present(NetworkState& net, const SignalVector& inputs,
                         std::optional<Address> teacher)
{
    PresentationStep step;
    step.cycle = net.next_cycle;

    if (teacher) {
        if (net.rs_module.find(*teacher) == nullptr) {
            throw Error(ErrorCode::UnknownLabel, to_string(*teacher) + " is not an RS label");
        }
        const auto z = std::pair{*teacher, Level(1.0)};
        const auto verdict =
            module_step(net.rs_module.units, build_vector({&z, 1}), &Unit::core);
        if (verdict.winner) {
            step.winners[net.rs_module.module_id] = *verdict.winner;
        }
        if (inputs.empty()) {
            step.events.push_back({EventKind::AssociativeUnsupported, net.rs_module.module_id,
                                   *teacher, std::nullopt});
        }
    }

    if (!inputs.empty()) {
        for (auto& module : net.ps_modules) {
            train_module(net, module, inputs, teacher, step);
        }
    }

    ++net.next_cycle;
    net.trace.push_back(step);
    return step;
}

PresentationStep recall_step(const NetworkState& net, const SignalVector& inputs)
{
    PresentationStep step;
    step.cycle = net.next_cycle;
    for (const auto& module : net.ps_modules) {
        const auto verdict = module_step(module.units, inputs, &Unit::core);
        if (verdict.novelty) {
            step.events.push_back({EventKind::NoveltyFired, module.module_id, std::nullopt,
                                   std::nullopt});
        }
        if (verdict.winner) {
            step.winners[module.module_id] = *verdict.winner;
        }
    }
    return step;
}

std::optional<Address> recall(const NetworkState& net, const SignalVector& inputs)
{
    const auto step = recall_step(net, inputs);
    for (const auto& module : net.ps_modules) {
        auto it = step.winners.find(module.module_id);
        if (it == step.winners.end()) {
            continue;
        }
        const Unit* unit = module.find(it->second.address);
        return unit->life.state == LifecycleState::Bound ? unit->life.teacher : std::nullopt;
    }
    return std::nullopt;
}

const Unit* find_unit(const NetworkState& net, Address address)
{
    if (address.module_id == net.rs_module.module_id) {
        return net.rs_module.find(address);
    }
    for (const auto& module : net.ps_modules) {
        if (module.module_id == address.module_id) {
            return module.find(address);
        }
    }
    return nullptr;
}

}  // namespace nedet
