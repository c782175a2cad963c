#pragma once

// Presentative / representative system orchestration.
//
// PS modules hold perceptual detectors that start Free and are captured by
// novel inputs. The RS module holds one pre-wired label detector per class;
// presenting a teacher address fires that label detector, which acts as the
// learning signal z for whichever PS detector wins in the same cycle.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "nedet/competition.hpp"
#include "nedet/detector.hpp"
#include "nedet/learning.hpp"
#include "nedet/signals.hpp"

namespace nedet {

/// Module id of the receptor field that feeds raw stimuli.
inline constexpr std::uint32_t kReceptorModule = 0;

enum class LifecycleState { Free, Identifier, Bound };

std::string_view to_string(LifecycleState state);
LifecycleState parse_lifecycle(std::string_view text);

struct Lifecycle {
    LifecycleState state = LifecycleState::Free;
    std::optional<Address> teacher;  // set iff state == Bound

    bool operator==(const Lifecycle&) const = default;
};

struct Unit {
    DetectorCore core;
    MembershipTable table;
    Lifecycle life;
    std::set<Address> partners;  // addresses this unit has memorized across PS/RS

    bool operator==(const Unit&) const = default;
};

struct ModuleState {
    std::uint32_t module_id = 0;
    std::vector<Unit> units;  // ordered by unit_id

    std::size_t free_count() const;
    Unit* find(Address address);
    const Unit* find(Address address) const;

    bool operator==(const ModuleState&) const = default;
};

/// A module of `size` Free detectors.
ModuleState make_module(std::uint32_t module_id, std::size_t size);

enum class EventKind { NoveltyFired, Captured, Bound, Corrected, Conflict, AssociativeUnsupported };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct Event {
    EventKind kind = EventKind::NoveltyFired;
    std::uint32_t module_id = 0;
    std::optional<Address> subject;
    std::optional<Address> partner;
    // Corridor snapshot after Captured / Corrected.
    std::size_t concept_size = 0;
    double g0 = 0.0;
    double g_star = 0.0;

    bool operator==(const Event&) const = default;
};

struct PresentationStep {
    std::uint64_t cycle = 0;
    std::map<std::uint32_t, Signal> winners;  // the ensemble: one signal per module at most
    std::vector<Event> events;

    bool operator==(const PresentationStep&) const = default;
};

enum class YMaxPolicy {
    CorridorCeiling,  // g* + sum(max) over the concept
    Fixed,
};

struct NetworkConfig {
    CorridorParams corridor;
    LearningMode learning = TeacherMode{};
    ComparisonRule rule = ComparisonRule::AtLeast;
    YMaxPolicy y_max_policy = YMaxPolicy::CorridorCeiling;
    double y_max_fixed = 1.0;
    std::vector<std::size_t> ps_module_sizes{64};

    bool operator==(const NetworkConfig&) const = default;
};

void validate(const NetworkConfig& config);

struct NetworkState {
    NetworkConfig config;
    std::vector<ModuleState> ps_modules;
    ModuleState rs_module;
    std::vector<PresentationStep> trace;
    std::uint64_t next_cycle = 0;

    bool operator==(const NetworkState&) const = default;
};

/// PS modules get ids 1..n, the RS module n + 1.
NetworkState make_network(const NetworkConfig& config);

/// Adds a pre-wired RS label detector and returns its address.
Address add_label(NetworkState& net);

/// Turns the first Free detector of the module into an identifier of the
/// inputs. Throws NoFreeDetector.
Address capture(ModuleState& module, const SignalVector& inputs, const NetworkConfig& config);

/// Re-derives concept, g0, g* and y_max from the unit's table and bands.
/// An update that would empty the concept is not written back.
void refresh_corridor(Unit& unit, const NetworkConfig& config);

/// One learning cycle on the unit (teacher or self-learning, per its table),
/// followed by refresh_corridor.
void learn(Unit& unit, const SignalVector& inputs, const NetworkConfig& config);

/// Mutual memorization of a PS detector and an RS label. Returns false when
/// the pair was already bound. Throws AlreadyBound if the PS detector is
/// bound to a different label.
bool bind(NetworkState& net, Address ps_address, Address rs_address);

/// One training presentation: compete in every PS module, then capture,
/// bind, correct or resolve a conflict per module. Appends to net.trace.
PresentationStep present(NetworkState& net, const SignalVector& inputs,
                         std::optional<Address> teacher);

/// Inference-only pass; never mutates the network.
PresentationStep recall_step(const NetworkState& net, const SignalVector& inputs);

/// Label bound to the winner of the first PS module that has one.
std::optional<Address> recall(const NetworkState& net, const SignalVector& inputs);

const Unit* find_unit(const NetworkState& net, Address address);

}  // namespace nedet
