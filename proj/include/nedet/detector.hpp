#pragma once

// Forward pipeline of a single neuron-detector.
//
// Inputs are split by concept membership into g' (concept addresses) and
// g'' (other addresses inside the receptive field). Only the threshold part
// dg = g0 + g' is compared against g*; g'' contributes to the output level
// but never to the firing decision.

#include <cstdint>
#include <map>
#include <set>
#include <variant>

#include "nedet/signals.hpp"

namespace nedet {

enum class ComparisonRule {
    AtLeast,  // g0 + g' >= g*
    Greater,  // g0 + g' >  g*
};

/// Observed level statistics for one input address. min <= opt <= max.
struct LevelBand {
    double min = 0.0;
    double opt = 0.0;
    double max = 0.0;
    std::uint64_t count = 0;

    bool operator==(const LevelBand&) const = default;
};

using BandMap = std::map<Address, LevelBand>;

struct DetectorCore {
    Address own_address;
    std::set<Address> receptive_field;
    std::set<Address> concept_set;  // subset of receptive_field
    BandMap bands;
    double g0 = 0.0;
    double g_star = 1.0;
    double y_max = 1.0;
    ComparisonRule rule = ComparisonRule::AtLeast;

    bool operator==(const DetectorCore&) const = default;
};

/// Throws InvalidDetector if any structural invariant is broken.
void validate(const DetectorCore& det);

struct Partition {
    double g_prime = 0.0;
    double g_dprime = 0.0;
};

/// Inputs outside the receptive field are ignored.
Partition partition_inputs(const SignalVector& inputs, const DetectorCore& det);

bool check_excitation(double base, double contribution, double threshold,
                      ComparisonRule rule = ComparisonRule::AtLeast);

/// y = (g0 + g') + g''; the parenthesised term is dg.
double output_level(double g0, double g_prime, double g_dprime);

/// h1: input addresses and concept are disjoint.
struct NoMatch {
    bool operator==(const NoMatch&) const = default;
};

/// h2: dg fell short of g*.
struct SubThreshold {
    double delta_g = 0.0;
    bool operator==(const SubThreshold&) const = default;
};

struct Fired {
    double raw_level = 0.0;
    double g_prime = 0.0;
    double g_dprime = 0.0;
    double delta_g = 0.0;
    bool operator==(const Fired&) const = default;
};

using DetectorOutcome = std::variant<NoMatch, SubThreshold, Fired>;

DetectorOutcome detector_step(const DetectorCore& det, const SignalVector& inputs);

/// Millivolt reading of the corridor: resting potential, excitation
/// threshold and a per-input EPSP.
struct PhysiologicalPreset {
    double resting_mv = -65.0;
    double threshold_mv = -45.0;
    double epsp_mv = 1.0;

    /// n simultaneous EPSPs summed onto the resting potential.
    bool fires(std::size_t active_inputs, ComparisonRule rule = ComparisonRule::AtLeast) const;
    /// Same decision in the positive form: g0 = 0, g* = et - rp.
    bool fires_positive_form(std::size_t active_inputs,
                             ComparisonRule rule = ComparisonRule::AtLeast) const;
};

}  // namespace nedet
