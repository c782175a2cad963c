#pragma once

// Concept learning for a detector.
//
// A membership table counts, per receptive-field address, how many learning
// cycles the address was present in (l) against the total number of cycles
// (k). With a teacher an address belongs to the concept only if it was
// present in every cycle (w = l/k = 1, relaxed by delta); self-learning uses
// the power function w' = (l/k)^c against a threshold q.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>

#include "nedet/detector.hpp"
#include "nedet/signals.hpp"

namespace nedet {

struct TeacherMode {
    double delta = 0.0;  // in_concept <=> w >= 1 - delta
    bool operator==(const TeacherMode&) const = default;
};

struct SelfLearningMode {
    double c = 0.5;
    double q = 0.7;
    bool operator==(const SelfLearningMode&) const = default;
};

using LearningMode = std::variant<TeacherMode, SelfLearningMode>;

/// Throws InvalidConfig if delta, c or q fall outside their open ranges.
void validate(const LearningMode& mode);

class MembershipTable {
public:
    MembershipTable() = default;
    MembershipTable(std::set<Address> field, LearningMode mode);

    const LearningMode& mode() const noexcept { return mode_; }
    std::uint64_t cycles() const noexcept { return cycles_; }
    std::uint64_t occurrences(Address address) const;
    const std::map<Address, std::uint64_t>& counts() const noexcept { return counts_; }
    bool in_field(Address address) const { return counts_.contains(address); }

    /// One learning cycle: k += 1 and l += 1 for every present field address.
    void record(const SignalVector& inputs);

    /// Rebuilds a table from stored counters (checkpoint restore).
    static MembershipTable from_counts(std::map<Address, std::uint64_t> counts,
                                       std::uint64_t cycles, LearningMode mode);

    bool operator==(const MembershipTable&) const = default;

private:
    std::map<Address, std::uint64_t> counts_;
    std::uint64_t cycles_ = 0;
    LearningMode mode_;
};

struct Membership {
    double w = 0.0;
    bool in_concept = false;
};

/// Throws ZeroCycles when no learning cycle has happened yet.
Membership membership(const MembershipTable& table, Address address);

/// Throws ZeroCycles.
std::set<Address> extract_concept(const MembershipTable& table);

/// First observation initializes min = opt = max; opt is the running mean.
LevelBand update_band(const std::optional<LevelBand>& band, Level observed);

struct CorridorParams {
    double theta = 0.9;           // corridor tightness, (0, 1]
    double epsilon_level = 1e-6;  // observations below this never reach a band

    bool operator==(const CorridorParams&) const = default;
};

void validate(const CorridorParams& params);

/// Folds every present field address with level >= epsilon into its band.
void observe_levels(BandMap& bands, const MembershipTable& table, const SignalVector& inputs,
                    const CorridorParams& params);

/// Teacher-mode learning cycle. Cycles without z leave table and bands
/// unchanged. Throws WrongLearningMode for a self-learning table.
void teacher_update(MembershipTable& table, BandMap& bands, const SignalVector& inputs,
                    bool z_present, const CorridorParams& params = {});

/// Self-learning cycle; needs no teacher. Throws WrongLearningMode.
void self_update(MembershipTable& table, BandMap& bands, const SignalVector& inputs,
                 const CorridorParams& params = {});

struct Thresholds {
    double g0 = 0.0;
    double g_star = 0.0;

    bool operator==(const Thresholds&) const = default;
};

/// g* = max(theta * sum(opt), sum(min)) and g0 = g* - sum(min): all concept
/// inputs at their minimum levels reach g* exactly, any single missing input
/// falls short. theta * sum(opt) is floored onto a 2^-40 grid so that corridor
/// sums over grid-aligned levels stay exact.
/// Throws EmptyConcept or MissingBand.
Thresholds recompute_thresholds(const BandMap& bands, const std::set<Address>& concept_set,
                                const CorridorParams& params);

/// Largest raw output the corridor admits from concept inputs: g* + sum(max).
double corridor_ceiling(const BandMap& bands, const std::set<Address>& concept_set, double g_star);

}  // namespace nedet
