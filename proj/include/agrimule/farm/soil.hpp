#pragma once

#include "agrimule/core/time.hpp"
#include "agrimule/core/types.hpp"
#include "agrimule/farm/weather.hpp"

namespace agrimule::farm {

/// Root-zone water balance. Water is tracked as a mass so that pump
/// deliveries (1 L = 1 kg) add exactly; moisture is the gravimetric ratio.
struct SoilState {
    double water_kg = 0.0;
    double dry_mass_kg = 1.0;
    double target_pct = 45.0;
    double dry_rate_k0 = 0.0; ///< %/hour at 25 °C and 0 %RH
    double temp_coeff = 0.0;  ///< 1/°C
    double gained_kg = 0.0;   ///< cumulative water accepted from the pump
    double runoff_kg = 0.0;   ///< water rejected by the 100 % clamp

    double moisture_pct() const noexcept { return 100.0 * water_kg / dry_mass_kg; }

    static SoilState with_moisture(const Region& region, double moisture_pct, double dry_rate_k0 = 0.0,
                                   double temp_coeff = 0.0, double target_pct = 45.0);
};

/// Drying loss in moisture percent over dt: k0 * (1 + α(T - 25)) * (1 - H/100) * hours.
double drying_loss_pct(const SoilState& soil, Millis dt, const Weather& weather) noexcept;

/// Advances the water balance by dt with `delivered_l` of pump water.
/// Throws Error("bad-step") when dt <= 0.
SoilState step_soil(const SoilState& soil, Millis dt, const Weather& weather, double delivered_l);

} // namespace agrimule::farm
