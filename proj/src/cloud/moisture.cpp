#include "agrimule/cloud/moisture.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::cloud {

double gravimetric_moisture(const GravimetricSample& sample) {
    if (!(sample.dry_soil_weight_g > 0.0)) throw Error("bad-sample", "dry soil weight must be positive");
    if (sample.water_weight_g < 0.0) throw Error("bad-sample", "water weight must be non-negative");
    return 100.0 * sample.water_weight_g / sample.dry_soil_weight_g;
}

double calibrate_moisture(const farm::RawSample& raw, const CalibrationCurve& curve) {
    if (!curve.valid()) throw Error("bad-curve", "need 0 <= wet_raw < dry_raw <= 1023");
    const double pct = 100.0 * (curve.dry_raw - raw.adc_raw) / (curve.dry_raw - curve.wet_raw);
    return std::clamp(pct, 0.0, 100.0);
}

double compute_water_quantity(double moisture_pct, const Region& region, const IrrigationPolicy& policy) {
    const double deficit_pct = policy.m_high - moisture_pct;
    if (deficit_pct <= 0.0) return 0.0;
    // deficit/100 * dry mass, multiplied first so round percentages stay exact.
    const double liters = deficit_pct * region.dry_soil_mass_kg() / 100.0;
    return std::min(policy.max_quantity_l, liters);
}

} // namespace agrimule::cloud
