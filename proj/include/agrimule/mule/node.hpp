#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "agrimule/core/types.hpp"
#include "agrimule/mule/frame.hpp"
#include "agrimule/mule/payloads.hpp"

namespace agrimule::mule {

struct NodeConfig {
    std::uint8_t readings_per_visit = 3;
    /// Samples are taken on multiples of this interval so reading_ts (whole
    /// seconds) is the exact send time.
    Millis sample_interval{1000};
};

/// Produces the region's environmental triple at a given time; seq is assigned by the node.
using Sampler = std::function<SensorReading(SimTime)>;

/// Region microcontroller + Wi-Fi module.
class SensorNode {
public:
    SensorNode(RegionId region, Sampler sampler, NodeConfig config = {});

    RegionId region() const noexcept { return region_; }
    const NodeConfig& config() const noexcept { return config_; }

    /// Handles ASSOC_REQ; repeated requests before collection starts get the same answer.
    std::optional<Frame> on_assoc_request(const Frame& request);

    /// Starts a transfer for an accepted association; returns its first seq.
    std::uint16_t begin_transfer();

    /// Samples the next reading at time t, consuming one sequence number.
    SensorReading sample(SimTime t);

    /// First multiple of the sample interval at or after t.
    SimTime next_sample_time(SimTime t) const;

    std::uint64_t readings_transmitted() const noexcept { return transmitted_; }
    void note_transmitted() noexcept { ++transmitted_; }

private:
    RegionId region_;
    Sampler sampler_;
    NodeConfig config_;
    std::uint16_t next_seq_ = 0;
    std::optional<AssocAccept> pending_;
    std::uint64_t transmitted_ = 0;
};

} // namespace agrimule::mule
