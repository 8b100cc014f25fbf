#pragma once

#include <memory>

#include "agrimule/cloud/moisture.hpp"
#include "agrimule/core/types.hpp"

namespace agrimule::cloud {

/// On/off rule applied to the newest calibrated moisture of a region.
class PumpPolicy {
public:
    virtual ~PumpPolicy() = default;
    virtual DecisionCommand decide(double moisture_pct, bool pump_on) const = 0;
};

/// Bang-bang control with a deadband: on below m_low, off at or above m_high.
class HysteresisPolicy final : public PumpPolicy {
public:
    explicit HysteresisPolicy(IrrigationPolicy params) : params_(params) {}
    DecisionCommand decide(double moisture_pct, bool pump_on) const override;

private:
    IrrigationPolicy params_;
};

/// Baseline without a deadband: on below the threshold, off at or above it.
class SingleThresholdPolicy final : public PumpPolicy {
public:
    explicit SingleThresholdPolicy(double threshold_pct) : threshold_(threshold_pct) {}
    DecisionCommand decide(double moisture_pct, bool pump_on) const override;

private:
    double threshold_;
};

/// Full decision for one reading under the hysteresis rule. water_quantity_l
/// always carries the current requirement; On implies it is positive.
IrrigationDecision decide(const SensorReading& reading, bool pump_on, const IrrigationPolicy& policy,
                          const Region& region, SimTime computed_at);

/// Same, with a caller-supplied on/off rule.
IrrigationDecision decide(const SensorReading& reading, bool pump_on, const PumpPolicy& rule,
                          const IrrigationPolicy& policy, const Region& region, SimTime computed_at);

} // namespace agrimule::cloud
