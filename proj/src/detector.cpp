#include "nedet/detector.hpp"

#include <algorithm>
#include <cmath>

#include "nedet/error.hpp"

namespace nedet {

void validate(const DetectorCore& det)
{
    const auto where = to_string(det.own_address);
    if (!std::includes(det.receptive_field.begin(), det.receptive_field.end(),
                       det.concept_set.begin(), det.concept_set.end())) {
        throw Error(ErrorCode::InvalidDetector, where + ": concept is not inside the receptive field");
    }
    if (!(det.g_star > 0.0) || !std::isfinite(det.g_star)) {
        throw Error(ErrorCode::InvalidDetector, where + ": g* must be positive");
    }
    if (!(det.g0 >= 0.0) || !std::isfinite(det.g0)) {
        throw Error(ErrorCode::InvalidDetector, where + ": g0 must be non-negative");
    }
    if (!(det.y_max > 0.0)) {
        throw Error(ErrorCode::InvalidDetector, where + ": y_max must be positive");
    }
    for (const Address& a : det.concept_set) {
        auto it = det.bands.find(a);
        if (it == det.bands.end()) {
            throw Error(ErrorCode::InvalidDetector, where + ": no band for concept input " + to_string(a));
        }
        const LevelBand& b = it->second;
        if (!(b.min <= b.opt && b.opt <= b.max)) {
            throw Error(ErrorCode::InvalidDetector, where + ": band for " + to_string(a) + " is not ordered");
        }
    }
}

Partition partition_inputs(const SignalVector& inputs, const DetectorCore& det)
{
    Partition p;
    for (const auto& [address, level] : inputs) {
        if (det.concept_set.contains(address)) {
            p.g_prime += level.value();
        } else if (det.receptive_field.contains(address)) {
            p.g_dprime += level.value();
        }
    }
    return p;
}

bool check_excitation(double base, double contribution, double threshold, ComparisonRule rule)
{
    const double sum = base + contribution;
    return rule == ComparisonRule::AtLeast ? sum >= threshold : sum > threshold;
}

double output_level(double g0, double g_prime, double g_dprime)
{
    const double delta_g = g0 + g_prime;
    return delta_g + g_dprime;
}

DetectorOutcome detector_step(const DetectorCore& det, const SignalVector& inputs)
{
    const bool intersects = std::any_of(inputs.begin(), inputs.end(), [&](const auto& entry) {
        return det.concept_set.contains(entry.first);
    });
    if (!intersects) {
        return NoMatch{};
    }

    const Partition p = partition_inputs(inputs, det);
    if (!check_excitation(det.g0, p.g_prime, det.g_star, det.rule)) {
        return SubThreshold{det.g0 + p.g_prime};
    }
    return Fired{output_level(det.g0, p.g_prime, p.g_dprime), p.g_prime, p.g_dprime,
                 det.g0 + p.g_prime};
}

namespace {

double summed_epsp(std::size_t n, double epsp)
{
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += epsp;
    }
    return total;
}

}  // namespace

bool PhysiologicalPreset::fires(std::size_t active_inputs, ComparisonRule rule) const
{
    return check_excitation(resting_mv, summed_epsp(active_inputs, epsp_mv), threshold_mv, rule);
}

bool PhysiologicalPreset::fires_positive_form(std::size_t active_inputs, ComparisonRule rule) const
{
    return check_excitation(0.0, summed_epsp(active_inputs, epsp_mv), threshold_mv - resting_mv, rule);
}

}  // namespace nedet
