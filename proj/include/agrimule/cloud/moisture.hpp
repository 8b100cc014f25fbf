#pragma once

#include "agrimule/core/types.hpp"
#include "agrimule/farm/sensors.hpp"

namespace agrimule::cloud {

struct GravimetricSample {
    double water_weight_g = 0.0;
    double dry_soil_weight_g = 0.0;
};

/// Water weight over dry-soil weight, in percent. Not clamped: saturated
/// soils exceed 100 %. Throws Error("bad-sample") if dry weight <= 0.
double gravimetric_moisture(const GravimetricSample& sample);

/// Linear map of an FC28 ADC count onto [0, 100] %. Throws Error("bad-curve").
double calibrate_moisture(const farm::RawSample& raw, const CalibrationCurve& curve);

/// Hysteresis thresholds and the per-decision water cap.
struct IrrigationPolicy {
    double m_low = 30.0;  ///< pump-on threshold, %
    double m_high = 45.0; ///< pump-off / target, %
    double max_quantity_l = 500.0;

    bool valid() const noexcept { return 0.0 < m_low && m_low < m_high && m_high < 100.0 && max_quantity_l > 0.0; }
    friend bool operator==(const IrrigationPolicy&, const IrrigationPolicy&) = default;
};

/// Liters (= kg) of water that raise the root zone's gravimetric moisture to
/// m_high, capped at max_quantity_l; zero when already at or above target.
double compute_water_quantity(double moisture_pct, const Region& region, const IrrigationPolicy& policy);

} // namespace agrimule::cloud
