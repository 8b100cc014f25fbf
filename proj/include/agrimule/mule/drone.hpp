#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "agrimule/core/types.hpp"
#include "agrimule/mule/arq.hpp"
#include "agrimule/mule/link.hpp"
#include "agrimule/mule/node.hpp"
#include "agrimule/mule/session.hpp"
#include "agrimule/mule/tour.hpp"
#include "agrimule/sim/kernel.hpp"

namespace agrimule::mule {

struct DroneConfig {
    Vec2 base;
    double speed_mps = 5.0;
    Millis position_interval{1000};
    ArqParams node_arq{5, Millis{200}};
    ArqParams uplink_arq{5, Millis{1000}};
};

struct TourReport {
    std::uint32_t tour_id = 0;
    SimTime started;
    SimTime ended;
    std::vector<RegionId> visited;
    std::vector<RegionId> skipped;    ///< association failed
    std::vector<RegionId> incomplete; ///< collection timed out with a partial list
    std::uint32_t readings_collected = 0;
    std::uint32_t uploads = 0;         ///< UPLOAD exchanges attempted
    std::uint32_t upload_failures = 0; ///< exchanges that exhausted retries
    double distance_m = 0.0;

    friend bool operator==(const TourReport&, const TourReport&) = default;
};

/// One region the drone can visit: its geometry, its node and the link to it.
struct DroneStop {
    Region region;
    std::shared_ptr<SensorNode> node;
    Link* link = nullptr;
};

/// Executes tours: flies the plan, associates, collects and relays each region's
/// readings, and flushes anything still buffered once back at base.
class Drone {
public:
    Drone(sim::Kernel& kernel, DroneConfig config, std::vector<DroneStop> stops, Link& uplink, CloudReceiver cloud);

    /// Throws Error("busy") unless Idle.
    std::uint32_t dispatch();

    const DroneState& state() const noexcept { return state_; }
    const FlightPlan& plan() const noexcept { return plan_; }
    bool busy() const noexcept { return state_.mode != DroneMode::Idle; }

    std::function<void(const DroneState&)> on_state;       ///< every move and mode change
    std::function<void(const TourReport&)> on_tour_done;   ///< when the drone is Idle again
    std::function<void(const RelayOutcome&)> on_relay;

private:
    void set_state(DroneState next);
    void start_leg(std::size_t index);
    void fly(Millis remaining);
    void arrived();
    void at_region(const DroneStop& stop);
    void next_leg();
    void relay(std::function<void(bool)> after);
    void flush_at_base();
    void finish_tour();
    const DroneStop& stop_for(RegionId id) const;

    sim::Kernel& kernel_;
    DroneConfig config_;
    std::vector<DroneStop> stops_;
    Link& uplink_;
    CloudReceiver cloud_;

    FlightPlan plan_;
    DroneState state_;
    std::size_t leg_ = 0;
    std::uint16_t frame_seq_ = 0;
    std::uint32_t next_tour_id_ = 1;
    TourReport report_;
};

} // namespace agrimule::mule
