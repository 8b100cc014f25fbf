#pragma once

#include <chrono>
#include <compare>
#include <cstdint>

namespace agrimule {

using Millis = std::chrono::milliseconds;

/// Simulated time in whole milliseconds since scenario start.
struct SimTime {
    std::uint64_t millis = 0;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr double seconds() const noexcept { return static_cast<double>(millis) / 1000.0; }
    static constexpr SimTime from_seconds(std::uint64_t s) noexcept { return SimTime{s * 1000}; }
};

constexpr SimTime operator+(SimTime t, Millis d) noexcept {
    return SimTime{static_cast<std::uint64_t>(static_cast<std::int64_t>(t.millis) + d.count())};
}

constexpr SimTime operator-(SimTime t, Millis d) noexcept {
    return SimTime{static_cast<std::uint64_t>(static_cast<std::int64_t>(t.millis) - d.count())};
}

constexpr Millis operator-(SimTime a, SimTime b) noexcept {
    return Millis{static_cast<std::int64_t>(a.millis) - static_cast<std::int64_t>(b.millis)};
}

} // namespace agrimule
