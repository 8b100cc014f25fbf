#pragma once

#include "agrimule/core/types.hpp"
#include "agrimule/farm/weather.hpp"
#include "agrimule/sim/rng.hpp"

namespace agrimule::farm {

inline constexpr int kAdcMax = 1023;
inline constexpr double kAdcReferenceVolts = 5.0;

/// One 10-bit conversion on a 0-5 V analog input.
struct RawSample {
    int adc_raw = 0;
    double voltage = 0.0;

    /// Clamps to [0, 1023] and derives voltage = 5.0 * raw / 1023.
    static RawSample from_adc(int raw) noexcept;
};

struct Dht22Model {
    double sigma_temperature = 0.5; ///< °C
    double sigma_humidity = 2.0;    ///< %RH
};

struct Fc28Model {
    CalibrationCurve curve;
    int noise_lsb = 2; ///< uniform integer noise in [-noise_lsb, +noise_lsb]
};

struct Dht22Sample {
    double temperature_c = 0.0;
    double humidity_pct = 0.0;
};

/// Trace value plus zero-mean Gaussian noise; humidity clamped to [0, 100].
Dht22Sample sample_dht22(const WeatherTrace& trace, SimTime t, const Dht22Model& model, sim::RngStream& rng);

/// Noise-free ADC count for a given moisture: round(dry - m/100 * (dry - wet)).
int fc28_ideal_adc(double moisture_pct, const CalibrationCurve& curve) noexcept;

RawSample sample_fc28(double moisture_pct, const Fc28Model& model, sim::RngStream& rng);

} // namespace agrimule::farm
