#include "agrimule/farm/sensors.hpp"

#include <algorithm>
#include <cmath>

namespace agrimule::farm {

RawSample RawSample::from_adc(int raw) noexcept {
    const int clamped = std::clamp(raw, 0, kAdcMax);
    return {clamped, kAdcReferenceVolts * clamped / kAdcMax};
}

Dht22Sample sample_dht22(const WeatherTrace& trace, SimTime t, const Dht22Model& model, sim::RngStream& rng) {
    const Weather truth = trace.at(t);
    const double temperature = rng.normal(truth.temperature_c, model.sigma_temperature);
    const double humidity = rng.normal(truth.humidity_pct, model.sigma_humidity);
    return {temperature, std::clamp(humidity, 0.0, 100.0)};
}

int fc28_ideal_adc(double moisture_pct, const CalibrationCurve& curve) noexcept {
    const double span = curve.dry_raw - curve.wet_raw;
    return static_cast<int>(std::lround(curve.dry_raw - (moisture_pct / 100.0) * span));
}

RawSample sample_fc28(double moisture_pct, const Fc28Model& model, sim::RngStream& rng) {
    int raw = fc28_ideal_adc(moisture_pct, model.curve);
    if (model.noise_lsb > 0) raw += rng.uniform_int(-model.noise_lsb, model.noise_lsb);
    return RawSample::from_adc(raw);
}

} // namespace agrimule::farm
