#include "nedet/signals.hpp"

#include <charconv>
#include <cmath>

#include "nedet/error.hpp"

namespace nedet {

std::string to_string(Address address)
{
    return "m" + std::to_string(address.module_id) + "/u" + std::to_string(address.unit_id);
}

namespace {

std::uint32_t parse_component(std::string_view text, char tag, std::string_view whole)
{
    std::uint32_t value = 0;
    if (text.size() < 2 || text.front() != tag) {
        throw Error(ErrorCode::ParseError, "malformed address '" + std::string(whole) + "'");
    }
    const char* first = text.data() + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw Error(ErrorCode::ParseError, "malformed address '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Address parse_address(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        throw Error(ErrorCode::ParseError, "malformed address '" + std::string(text) + "'");
    }
    return Address{parse_component(text.substr(0, slash), 'm', text),
                   parse_component(text.substr(slash + 1), 'u', text)};
}

Level::Level(double value)
    : value_(value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::LevelOutOfRange, "level " + std::to_string(value) + " outside [0, 1]");
    }
}

std::optional<Level> SignalVector::level_at(Address address) const
{
    auto it = entries_.find(address);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::set<Address> SignalVector::addresses() const
{
    std::set<Address> out;
    for (const auto& [address, level] : entries_) {
        out.insert(out.end(), address);
    }
    return out;
}

SignalVector build_vector(std::span<const std::pair<Address, Level>> pairs)
{
    SignalVector vec;
    for (const auto& [address, level] : pairs) {
        if (level.value() <= 0.0) {
            throw Error(ErrorCode::ZeroLevel, "signal from " + to_string(address) + " has no excitation");
        }
        if (!vec.entries_.emplace(address, level).second) {
            throw Error(ErrorCode::DuplicateAddress, to_string(address) + " appears twice");
        }
    }
    return vec;
}

Level level_from_frequency(double hz)
{
    if (!(hz >= kLabilityMinHz && hz <= kLabilityMaxHz)) {
        throw Error(ErrorCode::OutOfBand, std::to_string(hz) + " Hz outside the 100..1000 Hz band");
    }
    return Level((hz - kLabilityMinHz) / (kLabilityMaxHz - kLabilityMinHz));
}

double frequency_from_level(Level level)
{
    return kLabilityMinHz + level.value() * (kLabilityMaxHz - kLabilityMinHz);
}

}  // namespace nedet
