#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agrimule/cloud/engine.hpp"
#include "agrimule/farm/farm.hpp"
#include "agrimule/mule/drone.hpp"
#include "agrimule/mule/link.hpp"
#include "agrimule/mule/node.hpp"
#include "agrimule/scenario/config.hpp"
#include "agrimule/sim/kernel.hpp"
#include "agrimule/store/telemetry_store.hpp"

namespace agrimule::scenario {

store::StoreHeader header_for(const ScenarioConfig& config);

/// A fully wired farm: ground truth, sensor nodes, drone, cloud and store,
/// all driven by one kernel. Everything except the constructor must run on
/// the kernel's loop thread.
class Scenario {
public:
    /// In-memory store.
    explicit Scenario(ScenarioConfig config);
    /// Uses the given store (typically file-backed and freshly created).
    Scenario(ScenarioConfig config, store::TelemetryStore store);

    Scenario(const Scenario&) = delete;
    Scenario& operator=(const Scenario&) = delete;

    /// Schedules farm ticks and automatic tours. Idempotent.
    void start();
    /// start() + run to the configured duration + finalize().
    sim::RunReport run();
    /// Appends the end-of-run pump snapshot for every region. Idempotent.
    void finalize();
    bool finalized() const noexcept { return finalized_; }
    SimTime end_time() const noexcept;

    // Operator surface. Throws Error("busy"), Error("unknown-region"),
    // Error("bad-quantity") or Error("bad-policy").
    std::uint32_t dispatch_drone();
    void pump_override(RegionId region, const PumpCommand& command, const std::string& operator_id);
    void set_policy(RegionId region, const cloud::IrrigationPolicy& policy);

    const ScenarioConfig& config() const noexcept { return config_; }
    sim::Kernel& kernel() noexcept { return kernel_; }
    const sim::Kernel& kernel() const noexcept { return kernel_; }
    farm::Farm& farm() noexcept { return farm_; }
    const farm::Farm& farm() const noexcept { return farm_; }
    cloud::DecisionEngine& engine() noexcept { return engine_; }
    const cloud::DecisionEngine& engine() const noexcept { return engine_; }
    mule::Drone& drone() noexcept { return *drone_; }
    const mule::Drone& drone() const noexcept { return *drone_; }
    store::TelemetryStore& store() noexcept { return store_; }
    const store::TelemetryStore& store() const noexcept { return store_; }

    mule::Link& node_link(RegionId region);
    mule::Link& uplink() noexcept { return *uplink_; }
    mule::Link& pump_link(RegionId region);
    const mule::SensorNode& node(RegionId region) const;

    /// Distinct readings the nodes put on the air (first transmissions only).
    std::uint64_t readings_transmitted() const;
    std::uint32_t tours_skipped_busy() const noexcept { return tours_skipped_busy_; }

    /// Drone position and mode changes (not persisted).
    std::function<void(const mule::DroneState&)> on_drone_state;

private:
    void farm_tick();
    void auto_tour();
    std::optional<mule::Frame> cloud_receive(const mule::Frame& upload);
    void send_pump(const mule::Frame& cmd);
    std::optional<mule::Frame> pump_controller(const mule::Frame& cmd);
    void pump_status_to_cloud(RegionId region);
    void log_pump(RegionId region, const std::string& cause);

    ScenarioConfig config_;
    store::TelemetryStore store_;
    sim::Kernel kernel_;
    farm::Farm farm_;
    cloud::DecisionEngine engine_;
    std::map<RegionId, std::unique_ptr<mule::Link>> node_links_;
    std::map<RegionId, std::unique_ptr<mule::Link>> pump_links_;
    std::unique_ptr<mule::Link> uplink_;
    std::map<RegionId, std::shared_ptr<mule::SensorNode>> nodes_;
    std::unique_ptr<mule::Drone> drone_;
    std::map<RegionId, std::uint16_t> last_pump_seq_;
    std::uint16_t status_seq_ = 0;
    std::uint32_t tours_skipped_busy_ = 0;
    bool started_ = false;
    bool finalized_ = false;
};

} // namespace agrimule::scenario
