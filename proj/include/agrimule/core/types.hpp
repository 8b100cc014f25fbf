#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "agrimule/core/geometry.hpp"
#include "agrimule/core/time.hpp"

namespace agrimule {

using RegionId = std::uint8_t;

/// FC28 raw-to-percent calibration endpoints.
struct CalibrationCurve {
    int dry_raw = 850; ///< ADC count at 0 % moisture
    int wet_raw = 350; ///< ADC count at 100 % moisture

    bool valid() const noexcept { return 0 <= wet_raw && wet_raw < dry_raw && dry_raw <= 1023; }
};

/// Static description of one irrigated farm region.
struct Region {
    RegionId id = 0;
    std::string name;
    Vec2 position;
    double area_m2 = 1.0;
    double root_depth_m = 0.3;
    double bulk_density = 1300.0; ///< kg/m³
    CalibrationCurve calibration;

    /// Mass of dry soil in the root zone, kg.
    double dry_soil_mass_kg() const noexcept { return bulk_density * root_depth_m * area_m2; }
};

/// One region's environmental triple as it travels node -> drone -> cloud.
struct SensorReading {
    RegionId region_id = 0;
    std::uint32_t reading_ts = 0; ///< whole seconds of SimTime
    double temperature = 0.0;     ///< °C
    double humidity = 0.0;        ///< %RH
    double soil_moisture = 0.0;   ///< gravimetric %
    std::uint16_t seq_no = 0;

    friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

struct PumpCommand {
    enum class Kind : std::uint8_t { Off = 0, On = 1 };
    Kind kind = Kind::Off;
    double quantity_l = 0.0; ///< meaningful for On only

    static PumpCommand on(double liters) { return {Kind::On, liters}; }
    static PumpCommand off() { return {Kind::Off, 0.0}; }
    bool is_on() const noexcept { return kind == Kind::On; }

    friend bool operator==(const PumpCommand&, const PumpCommand&) = default;
};

enum class DecisionCommand : std::uint8_t { NoChange = 0, On = 1, Off = 2 };

const char* to_string(DecisionCommand c) noexcept;
DecisionCommand decision_command_from_string(const std::string& s);

struct ReadingRef {
    RegionId region_id = 0;
    std::uint16_t seq_no = 0;
    friend bool operator==(const ReadingRef&, const ReadingRef&) = default;
};

/// Cloud output for one region, with provenance.
struct IrrigationDecision {
    RegionId region_id = 0;
    double water_quantity_l = 0.0;
    DecisionCommand command = DecisionCommand::NoChange;
    ReadingRef source_reading;
    SimTime computed_at;
    /// computed_at minus the node send time of the source reading
    Millis latency{0};
    /// automatic output overridden by an operator hold
    bool suppressed = false;

    friend bool operator==(const IrrigationDecision&, const IrrigationDecision&) = default;
};

} // namespace agrimule
