#pragma once

#include <gtest/gtest.h>

#include <initializer_list>
#include <utility>
#include <vector>

#include "nedet/error.hpp"
#include "nedet/signals.hpp"

namespace nedet::testing {

/// Code of the nedet::Error thrown by fn, failing the test if none is.
template <class Fn>
ErrorCode code_of(Fn&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Io;
}

/// Receptor address m0/u<unit>.
inline Address u(std::uint32_t unit)
{
    return Address{0, unit};
}

inline SignalVector vec(std::initializer_list<std::pair<Address, double>> entries)
{
    std::vector<std::pair<Address, Level>> pairs;
    for (const auto& [a, v] : entries) pairs.emplace_back(a, Level(v));
    return build_vector(pairs);
}

}  // namespace nedet::testing
