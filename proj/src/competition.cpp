#include "nedet/competition.hpp"

#include <algorithm>

#include "nedet/error.hpp"

namespace nedet {

CompetitionResult compete(std::span<const Contestant> fired)
{
    if (fired.empty()) {
        throw Error(ErrorCode::EmptyField, "competition without contestants");
    }
    const Contestant* best = &fired.front();
    for (const Contestant& c : fired.subspan(1)) {
        if (c.raw_level > best->raw_level ||
            (c.raw_level == best->raw_level && c.address < best->address)) {
            best = &c;
        }
    }
    CompetitionResult result{best->address, {}};
    for (const Contestant& c : fired) {
        if (c.address != best->address) {
            result.losers.insert(c.address);
        }
    }
    return result;
}

Level normalize(double raw_level, double y_max)
{
    return Level(std::clamp(raw_level / y_max, 0.0, 1.0));
}

ModuleVerdict assemble_verdict(std::span<const DetectorCore* const> detectors,
                               std::span<const DetectorOutcome> outcomes, bool inputs_present)
{
    ModuleVerdict verdict;
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        if (const auto* fired = std::get_if<Fired>(&outcomes[i])) {
            verdict.fired.push_back({detectors[i]->own_address, fired->raw_level});
        }
    }
    if (verdict.fired.empty()) {
        verdict.novelty = inputs_present;
        return verdict;
    }

    auto result = compete(verdict.fired);
    verdict.pre_excited = std::move(result.losers);
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        if (detectors[i]->own_address == result.winner) {
            verdict.winner_raw = std::get<Fired>(outcomes[i]).raw_level;
            verdict.winner = Signal{result.winner, normalize(verdict.winner_raw, detectors[i]->y_max)};
            break;
        }
    }
    return verdict;
}

}  // namespace nedet
