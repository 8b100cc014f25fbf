#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "agrimule/cloud/moisture.hpp"
#include "agrimule/cloud/policy.hpp"
#include "agrimule/mule/frame.hpp"
#include "agrimule/mule/payloads.hpp"
#include "agrimule/store/telemetry_store.hpp"

namespace agrimule::cloud {

struct EngineConfig {
    Millis compute_latency{50};
    Millis override_hold{10 * 60 * 1000};
};

struct IngestResult {
    mule::Frame ack; ///< DATA_ACK carrying the UploadReceipt
    std::uint16_t accepted = 0;
    std::uint16_t duplicates = 0;
    /// One per region with newly accepted readings, stamped computed_at = ingest + compute latency.
    std::vector<IrrigationDecision> decisions;
};

/// The cloud: deduplicates uploaded readings into the store, decides per
/// region, and turns On/Off decisions and operator overrides into PUMP_CMDs.
class DecisionEngine {
public:
    DecisionEngine(std::vector<Region> regions, std::map<RegionId, IrrigationPolicy> policies,
                   store::TelemetryStore& store, EngineConfig config = {});

    /// Throws Error("bad-upload"); nothing is stored for a rejected batch.
    IngestResult ingest(const mule::Frame& upload, SimTime now);

    /// Records the decision; returns the PUMP_CMD to send for an unsuppressed On/Off.
    std::optional<mule::Frame> commit(const IrrigationDecision& decision);

    /// Throws Error("unknown-region") or Error("bad-policy").
    void set_policy(RegionId region, const IrrigationPolicy& policy);
    const IrrigationPolicy& policy(RegionId region) const;

    /// Replaces the on/off rule for a region (default: hysteresis on its policy).
    void set_rule(RegionId region, std::shared_ptr<const PumpPolicy> rule);

    /// Operator command; wins over automation until now + hold. Audit-logged.
    /// Throws Error("unknown-region") or Error("bad-quantity").
    mule::Frame override_pump(RegionId region, const PumpCommand& command, const std::string& operator_id,
                              SimTime now);
    std::optional<SimTime> hold_until(RegionId region) const;

    /// Pump controller report (PUMP_ACK payload).
    void on_pump_status(const mule::PumpStatus& status);
    bool pump_on(RegionId region) const;

    const Region& region(RegionId id) const;
    const std::vector<Region>& regions() const noexcept { return regions_; }
    const EngineConfig& config() const noexcept { return config_; }
    std::uint64_t duplicates_rejected() const noexcept { return duplicates_rejected_; }

    /// Encoded DECISION frame for a decision (operator channel).
    mule::Frame decision_frame(const IrrigationDecision& d);

private:
    struct RegionSlot {
        IrrigationPolicy policy;
        std::shared_ptr<const PumpPolicy> rule;
        bool pump_on = false;
        std::optional<SimTime> hold_until;
    };
    RegionSlot& slot(RegionId id);
    const RegionSlot& slot(RegionId id) const;
    mule::Frame pump_frame(RegionId region, const PumpCommand& command);

    std::vector<Region> regions_;
    std::map<RegionId, RegionSlot> slots_;
    store::TelemetryStore& store_;
    EngineConfig config_;
    std::set<std::pair<RegionId, std::uint16_t>> seen_;
    std::uint16_t frame_seq_ = 0;
    std::uint64_t duplicates_rejected_ = 0;
};

} // namespace agrimule::cloud
