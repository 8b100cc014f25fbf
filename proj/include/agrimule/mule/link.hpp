#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "agrimule/core/time.hpp"
#include "agrimule/mule/frame.hpp"
#include "agrimule/sim/rng.hpp"

namespace agrimule::mule {

/// One-hop wireless impairments. Jitter adds a uniform [0, jitter] delay on
/// top of the base latency; outages drop everything sent inside [start, end).
struct LinkModel {
    Millis latency{100};
    Millis jitter{0};
    double loss_prob = 0.0;
    std::vector<std::pair<SimTime, SimTime>> outages;
};

struct LinkStats {
    std::array<std::uint64_t, 10> offered{};
    std::array<std::uint64_t, 10> lost{};

    std::uint64_t offered_of(FrameType t) const { return offered[static_cast<std::size_t>(t)]; }
    std::uint64_t lost_of(FrameType t) const { return lost[static_cast<std::size_t>(t)]; }
};

/// Symmetric link; both directions draw from the same labeled stream.
class Link {
public:
    Link(LinkModel model, sim::RngStream rng);

    /// Offers one frame to the link at `at`; returns its transit delay or nullopt if lost.
    std::optional<Millis> transit(SimTime at, FrameType type);

    const LinkModel& model() const noexcept { return model_; }
    LinkModel& model() noexcept { return model_; }
    const LinkStats& stats() const noexcept { return stats_; }

private:
    bool in_outage(SimTime at) const noexcept;

    LinkModel model_;
    sim::RngStream rng_;
    LinkStats stats_;
};

} // namespace agrimule::mule
