#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace agrimule::sim {

/// Deterministic random stream keyed by (scenario seed, label).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();
    double normal(double mean, double sigma);
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    bool bernoulli(double p);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Stable mix of a seed and a label; used to key RngStream.
std::uint64_t stream_key(std::uint64_t seed, std::string_view label) noexcept;

} // namespace agrimule::sim
