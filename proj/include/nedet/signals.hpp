#pragma once

// Addresses, excitation levels and signal vectors.
//
// A signal is an (address, level) pair: the address identifies the emitting
// neuron, the level is its normalized excitation in [0, 1]. Addresses are
// opaque ordered tokens; the ordering drives every deterministic tie-break.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace nedet {

struct Address {
    std::uint32_t module_id = 0;
    std::uint32_t unit_id = 0;

    auto operator<=>(const Address&) const = default;
};

/// Formats as "m<module>/u<unit>".
std::string to_string(Address address);
Address parse_address(std::string_view text);

class Level {
public:
    constexpr Level() = default;
    /// Throws LevelOutOfRange unless 0 <= value <= 1.
    explicit Level(double value);

    double value() const noexcept { return value_; }

    auto operator<=>(const Level&) const = default;

private:
    double value_ = 0.0;
};

struct Signal {
    Address address;
    Level level;

    bool operator==(const Signal&) const = default;
};

/// At most one strictly positive level per address.
class SignalVector {
public:
    using container_type = std::map<Address, Level>;
    using const_iterator = container_type::const_iterator;

    SignalVector() = default;

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const_iterator begin() const noexcept { return entries_.begin(); }
    const_iterator end() const noexcept { return entries_.end(); }

    bool contains(Address address) const { return entries_.contains(address); }
    std::optional<Level> level_at(Address address) const;
    std::set<Address> addresses() const;

    bool operator==(const SignalVector&) const = default;

private:
    friend SignalVector build_vector(std::span<const std::pair<Address, Level>> pairs);

    container_type entries_;
};

/// Throws DuplicateAddress or ZeroLevel.
SignalVector build_vector(std::span<const std::pair<Address, Level>> pairs);

inline constexpr double kLabilityMinHz = 100.0;
inline constexpr double kLabilityMaxHz = 1000.0;

/// Linear map of the 100..1000 Hz lability band onto [0, 1]. Throws OutOfBand.
Level level_from_frequency(double hz);
double frequency_from_level(Level level);

}  // namespace nedet
