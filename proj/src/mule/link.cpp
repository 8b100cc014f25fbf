#include "agrimule/mule/link.hpp"

namespace agrimule::mule {

Link::Link(LinkModel model, sim::RngStream rng) : model_(std::move(model)), rng_(std::move(rng)) {}

bool Link::in_outage(SimTime at) const noexcept {
    for (const auto& [start, end] : model_.outages)
        if (at >= start && at < end) return true;
    return false;
}

std::optional<Millis> Link::transit(SimTime at, FrameType type) {
    const auto idx = static_cast<std::size_t>(type);
    ++stats_.offered[idx];
    const bool dropped = rng_.bernoulli(model_.loss_prob);
    Millis delay = model_.latency;
    if (model_.jitter.count() > 0) delay += Millis{rng_.uniform_int(0, static_cast<int>(model_.jitter.count()))};
    if (dropped || in_outage(at)) {
        ++stats_.lost[idx];
        return std::nullopt;
    }
    return delay;
}

} // namespace agrimule::mule
