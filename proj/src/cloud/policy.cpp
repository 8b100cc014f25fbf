#include "agrimule/cloud/policy.hpp"

#include "agrimule/error.hpp"

namespace agrimule::cloud {

DecisionCommand HysteresisPolicy::decide(double moisture_pct, bool pump_on) const {
    if (!pump_on && moisture_pct < params_.m_low) return DecisionCommand::On;
    if (pump_on && moisture_pct >= params_.m_high) return DecisionCommand::Off;
    return DecisionCommand::NoChange;
}

DecisionCommand SingleThresholdPolicy::decide(double moisture_pct, bool pump_on) const {
    if (!pump_on && moisture_pct < threshold_) return DecisionCommand::On;
    if (pump_on && moisture_pct >= threshold_) return DecisionCommand::Off;
    return DecisionCommand::NoChange;
}

IrrigationDecision decide(const SensorReading& reading, bool pump_on, const PumpPolicy& rule,
                          const IrrigationPolicy& policy, const Region& region, SimTime computed_at) {
    if (reading.region_id != region.id) throw Error("unknown-region", "reading is for another region");
    IrrigationDecision d;
    d.region_id = region.id;
    d.source_reading = {reading.region_id, reading.seq_no};
    d.computed_at = computed_at;
    d.latency = computed_at - SimTime::from_seconds(reading.reading_ts);
    d.water_quantity_l = compute_water_quantity(reading.soil_moisture, region, policy);
    d.command = rule.decide(reading.soil_moisture, pump_on);
    if (d.command == DecisionCommand::On && !(d.water_quantity_l > 0.0)) d.command = DecisionCommand::NoChange;
    return d;
}

IrrigationDecision decide(const SensorReading& reading, bool pump_on, const IrrigationPolicy& policy,
                          const Region& region, SimTime computed_at) {
    return decide(reading, pump_on, HysteresisPolicy(policy), policy, region, computed_at);
}

} // namespace agrimule::cloud
