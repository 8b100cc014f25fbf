#include "agrimule/mule/tour.hpp"

#include <cmath>

#include "agrimule/error.hpp"

namespace agrimule::mule {

FlightPlan plan_tour(std::span<const Region> regions, Vec2 base, double speed_mps) {
    if (regions.empty()) throw Error("empty-tour");
    if (!(speed_mps > 0.0)) throw Error("bad-speed", "speed must be positive");

    FlightPlan plan;
    plan.base = base;
    plan.speed_mps = speed_mps;
    Vec2 at = base;
    double eta = 0.0;
    auto add_leg = [&](std::optional<RegionId> region, Vec2 to) {
        const double d = distance(at, to);
        eta += d / speed_mps;
        plan.legs.push_back({region, at, to, d, eta});
        plan.total_length_m += d;
        at = to;
    };
    for (const auto& r : regions) add_leg(r.id, r.position);
    add_leg(std::nullopt, base);
    return plan;
}

Millis leg_duration(double distance_m, double speed_mps) {
    return Millis{static_cast<Millis::rep>(std::ceil(distance_m / speed_mps * 1000.0 - 1e-9))};
}

const char* to_string(DroneMode m) noexcept {
    switch (m) {
    case DroneMode::Idle: return "idle";
    case DroneMode::EnRoute: return "en-route";
    case DroneMode::Associating: return "associating";
    case DroneMode::Collecting: return "collecting";
    case DroneMode::Relaying: return "relaying";
    case DroneMode::Returning: return "returning";
    }
    return "?";
}

bool is_legal_transition(DroneMode from, DroneMode to) noexcept {
    using M = DroneMode;
    switch (from) {
    case M::Idle: return to == M::EnRoute;
    case M::EnRoute: return to == M::Associating;
    case M::Associating: return to == M::Collecting || to == M::EnRoute || to == M::Returning;
    case M::Collecting: return to == M::Relaying;
    case M::Relaying: return to == M::EnRoute || to == M::Returning;
    case M::Returning: return to == M::Idle;
    }
    return false;
}

DroneState transition(DroneState state, DroneMode to, std::optional<RegionId> region) {
    if (!is_legal_transition(state.mode, to))
        throw Error("illegal-transition", std::string(to_string(state.mode)) + " -> " + to_string(to));
    if (to == DroneMode::Idle && !state.buffer.empty())
        throw Error("illegal-transition", "cannot go idle with buffered readings");
    state.mode = to;
    state.region = region;
    return state;
}

DroneState advance_drone(DroneState state, Millis dt) {
    if (dt.count() <= 0) return state;
    if (state.mode != DroneMode::EnRoute && state.mode != DroneMode::Returning) return state;

    const Vec2 delta = state.target - state.position;
    const double remaining = norm(delta);
    const double reach = state.speed_mps * static_cast<double>(dt.count()) / 1000.0;
    if (remaining <= reach + 1e-9) {
        state.position = state.target;
        if (state.mode == DroneMode::EnRoute) {
            state.mode = DroneMode::Associating;
        } else if (state.buffer.empty()) {
            state.mode = DroneMode::Idle;
            state.region.reset();
        }
        return state;
    }
    state.position = state.position + (reach / remaining) * delta;
    return state;
}

} // namespace agrimule::mule
