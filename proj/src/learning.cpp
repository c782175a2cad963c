#include "nedet/learning.hpp"

#include <algorithm>
#include <cmath>

#include "nedet/error.hpp"

namespace nedet {

void validate(const LearningMode& mode)
{
    if (const auto* teacher = std::get_if<TeacherMode>(&mode)) {
        if (!(teacher->delta >= 0.0 && teacher->delta < 1.0)) {
            throw Error(ErrorCode::InvalidConfig, "delta must lie in [0, 1)");
        }
        return;
    }
    const auto& self = std::get<SelfLearningMode>(mode);
    if (!(self.c > 0.0 && self.c < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "c must lie in (0, 1)");
    }
    if (!(self.q > 0.0 && self.q < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "q must lie in (0, 1)");
    }
}

void validate(const CorridorParams& params)
{
    if (!(params.theta > 0.0 && params.theta <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "theta must lie in (0, 1]");
    }
    if (!(params.epsilon_level > 0.0 && params.epsilon_level <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon_level must lie in (0, 1]");
    }
}

MembershipTable::MembershipTable(std::set<Address> field, LearningMode mode)
    : mode_(mode)
{
    validate(mode_);
    for (const Address& a : field) {
        counts_.emplace_hint(counts_.end(), a, 0);
    }
}

std::uint64_t MembershipTable::occurrences(Address address) const
{
    auto it = counts_.find(address);
    return it == counts_.end() ? 0 : it->second;
}

void MembershipTable::record(const SignalVector& inputs)
{
    ++cycles_;
    for (const auto& [address, level] : inputs) {
        if (auto it = counts_.find(address); it != counts_.end()) {
            ++it->second;
        }
    }
}

MembershipTable MembershipTable::from_counts(std::map<Address, std::uint64_t> counts,
                                             std::uint64_t cycles, LearningMode mode)
{
    MembershipTable table({}, mode);
    for (const auto& [address, l] : counts) {
        if (l > cycles) {
            throw Error(ErrorCode::ParseError,
                        "occurrence count of " + to_string(address) + " exceeds cycle count");
        }
    }
    table.counts_ = std::move(counts);
    table.cycles_ = cycles;
    return table;
}

Membership membership(const MembershipTable& table, Address address)
{
    if (table.cycles() == 0) {
        throw Error(ErrorCode::ZeroCycles, "membership of " + to_string(address) + " before any cycle");
    }
    const double ratio = static_cast<double>(table.occurrences(address)) /
                         static_cast<double>(table.cycles());
    if (const auto* teacher = std::get_if<TeacherMode>(&table.mode())) {
        return {ratio, ratio >= 1.0 - teacher->delta};
    }
    const auto& self = std::get<SelfLearningMode>(table.mode());
    const double w = std::pow(ratio, self.c);
    return {w, w >= self.q};
}

std::set<Address> extract_concept(const MembershipTable& table)
{
    if (table.cycles() == 0) {
        throw Error(ErrorCode::ZeroCycles, "concept requested before any cycle");
    }
    std::set<Address> concept_set;
    for (const auto& [address, l] : table.counts()) {
        if (l > 0 && membership(table, address).in_concept) {
            concept_set.insert(concept_set.end(), address);
        }
    }
    return concept_set;
}

LevelBand update_band(const std::optional<LevelBand>& band, Level observed)
{
    const double x = observed.value();
    if (!band || band->count == 0) {
        return LevelBand{x, x, x, 1};
    }
    LevelBand out = *band;
    out.min = std::min(out.min, x);
    out.max = std::max(out.max, x);
    const auto n = static_cast<double>(out.count);
    out.opt = std::clamp((out.opt * n + x) / (n + 1.0), out.min, out.max);
    ++out.count;
    return out;
}

void observe_levels(BandMap& bands, const MembershipTable& table, const SignalVector& inputs,
                    const CorridorParams& params)
{
    for (const auto& [address, level] : inputs) {
        if (!table.in_field(address) || level.value() < params.epsilon_level) {
            continue;
        }
        auto it = bands.find(address);
        std::optional<LevelBand> prior;
        if (it != bands.end()) {
            prior = it->second;
        }
        bands[address] = update_band(prior, level);
    }
}

void teacher_update(MembershipTable& table, BandMap& bands, const SignalVector& inputs,
                    bool z_present, const CorridorParams& params)
{
    if (!std::holds_alternative<TeacherMode>(table.mode())) {
        throw Error(ErrorCode::WrongLearningMode, "teacher update on a self-learning table");
    }
    if (!z_present) {
        return;
    }
    table.record(inputs);
    observe_levels(bands, table, inputs, params);
}

void self_update(MembershipTable& table, BandMap& bands, const SignalVector& inputs,
                 const CorridorParams& params)
{
    if (!std::holds_alternative<SelfLearningMode>(table.mode())) {
        throw Error(ErrorCode::WrongLearningMode, "self-learning update on a teacher table");
    }
    table.record(inputs);
    observe_levels(bands, table, inputs, params);
}

namespace {

constexpr int kThresholdGridBits = 40;

double floor_to_grid(double x)
{
    return std::ldexp(std::floor(std::ldexp(x, kThresholdGridBits)), -kThresholdGridBits);
}

}  // namespace

Thresholds recompute_thresholds(const BandMap& bands, const std::set<Address>& concept_set,
                                const CorridorParams& params)
{
    if (concept_set.empty()) {
        throw Error(ErrorCode::EmptyConcept, "cannot derive a corridor for an empty concept");
    }
    // Summation runs in address order, matching partition_inputs.
    double sum_opt = 0.0;
    double sum_min = 0.0;
    for (const Address& a : concept_set) {
        auto it = bands.find(a);
        if (it == bands.end()) {
            throw Error(ErrorCode::MissingBand, "no level band for " + to_string(a));
        }
        sum_opt += it->second.opt;
        sum_min += it->second.min;
    }

    const double target = floor_to_grid(params.theta * sum_opt);
    if (target <= sum_min) {
        return Thresholds{0.0, sum_min};
    }
    const double g0 = target - sum_min;
    // g* is re-derived from the stored g0 so that g0 + sum(min) >= g* holds
    // bit-for-bit under the detector's own addition.
    return Thresholds{g0, g0 + sum_min};
}

double corridor_ceiling(const BandMap& bands, const std::set<Address>& concept_set, double g_star)
{
    double sum_max = 0.0;
    for (const Address& a : concept_set) {
        auto it = bands.find(a);
        if (it == bands.end()) {
            throw Error(ErrorCode::MissingBand, "no level band for " + to_string(a));
        }
        sum_max += it->second.max;
    }
    return g_star + sum_max;
}

}  // namespace nedet
