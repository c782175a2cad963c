#pragma once

// Winner-take-all competition inside one module.
//
// Every detector that fired takes part; the highest raw output wins, ties go
// to the smallest address, and every loser is dropped into pre-excitation
// for the current cycle. The winner's raw output is clamped into [0, 1].

#include <functional>
#include <optional>
#include <ranges>
#include <set>
#include <span>
#include <vector>

#include "nedet/detector.hpp"
#include "nedet/signals.hpp"

namespace nedet {

struct Contestant {
    Address address;
    double raw_level = 0.0;

    bool operator==(const Contestant&) const = default;
};

struct CompetitionResult {
    Address winner;
    std::set<Address> losers;
};

/// Throws EmptyField when nobody fired.
CompetitionResult compete(std::span<const Contestant> fired);

Level normalize(double raw_level, double y_max);

struct ModuleVerdict {
    std::optional<Signal> winner;
    double winner_raw = 0.0;
    std::set<Address> pre_excited;
    std::vector<Contestant> fired;
    bool novelty = false;
};

/// Assembles the verdict from per-detector outcomes, given in detector order.
ModuleVerdict assemble_verdict(std::span<const DetectorCore* const> detectors,
                               std::span<const DetectorOutcome> outcomes, bool inputs_present);

/// Runs every detector of a module on the inputs and lets the fired ones
/// compete. `proj` maps a range element to its DetectorCore.
template <std::ranges::forward_range Range, class Proj = std::identity>
ModuleVerdict module_step(const Range& detectors, const SignalVector& inputs, Proj proj = {})
{
    std::vector<const DetectorCore*> cores;
    std::vector<DetectorOutcome> outcomes;
    for (const auto& element : detectors) {
        const DetectorCore& core = std::invoke(proj, element);
        cores.push_back(&core);
        outcomes.push_back(detector_step(core, inputs));
    }
    return assemble_verdict(cores, outcomes, !inputs.empty());
}

}  // namespace nedet
