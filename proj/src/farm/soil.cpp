#include "agrimule/farm/soil.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::farm {

SoilState SoilState::with_moisture(const Region& region, double moisture_pct, double dry_rate_k0,
                                   double temp_coeff, double target_pct) {
    SoilState s;
    s.dry_mass_kg = region.dry_soil_mass_kg();
    s.water_kg = moisture_pct * s.dry_mass_kg / 100.0;
    s.dry_rate_k0 = dry_rate_k0;
    s.temp_coeff = temp_coeff;
    s.target_pct = target_pct;
    return s;
}

double drying_loss_pct(const SoilState& soil, Millis dt, const Weather& weather) noexcept {
    if (soil.dry_rate_k0 == 0.0) return 0.0;
    const double hours = static_cast<double>(dt.count()) / 3.6e6;
    const double temperature_factor = std::max(0.0, 1.0 + soil.temp_coeff * (weather.temperature_c - 25.0));
    const double humidity_factor = 1.0 - weather.humidity_pct / 100.0;
    return soil.dry_rate_k0 * temperature_factor * humidity_factor * hours;
}

SoilState step_soil(const SoilState& soil, Millis dt, const Weather& weather, double delivered_l) {
    if (dt.count() <= 0) throw Error("bad-step", "dt must be positive");
    SoilState next = soil;
    const double loss_kg = drying_loss_pct(soil, dt, weather) * soil.dry_mass_kg / 100.0;
    double water = soil.water_kg + delivered_l - loss_kg;
    next.gained_kg += delivered_l;
    if (water > soil.dry_mass_kg) {
        next.runoff_kg += water - soil.dry_mass_kg;
        water = soil.dry_mass_kg;
    }
    next.water_kg = std::max(0.0, water);
    return next;
}

} // namespace agrimule::farm
