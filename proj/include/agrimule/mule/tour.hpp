#pragma once

#include <optional>
#include <span>
#include <vector>

#include "agrimule/core/geometry.hpp"
#include "agrimule/core/time.hpp"
#include "agrimule/core/types.hpp"

namespace agrimule::mule {

struct TourLeg {
    std::optional<RegionId> region; ///< nullopt for the final leg back to base
    Vec2 from;
    Vec2 to;
    double distance_m = 0.0;
    double eta_s = 0.0; ///< flight time from departure, excluding dwell
};

struct FlightPlan {
    Vec2 base;
    double speed_mps = 1.0;
    std::vector<TourLeg> legs;
    double total_length_m = 0.0;
};

/// Visits regions in the given order and returns to base.
/// Throws Error("empty-tour") or Error("bad-speed").
FlightPlan plan_tour(std::span<const Region> regions, Vec2 base, double speed_mps);

/// Flight time for one leg rounded up to whole milliseconds.
Millis leg_duration(double distance_m, double speed_mps);

enum class DroneMode { Idle, EnRoute, Associating, Collecting, Relaying, Returning };

const char* to_string(DroneMode m) noexcept;

struct DroneState {
    DroneMode mode = DroneMode::Idle;
    std::optional<RegionId> region;
    Vec2 position;
    Vec2 target;
    double speed_mps = 5.0;
    std::vector<SensorReading> buffer;
};

/// Idle -> EnRoute -> Associating -> Collecting -> Relaying -> {EnRoute | Returning} -> Idle,
/// plus Associating -> {EnRoute | Returning} when a region is skipped.
bool is_legal_transition(DroneMode from, DroneMode to) noexcept;

/// Throws Error("illegal-transition"); entering Idle also requires an empty buffer.
DroneState transition(DroneState state, DroneMode to, std::optional<RegionId> region = std::nullopt);

/// Kinematic step: moves at most speed*dt toward the target while EnRoute or
/// Returning. Arrival turns EnRoute into Associating and Returning into Idle
/// (or leaves it Returning at base while data is still buffered).
DroneState advance_drone(DroneState state, Millis dt);

} // namespace agrimule::mule
