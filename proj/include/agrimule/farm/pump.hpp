#pragma once

#include "agrimule/core/time.hpp"
#include "agrimule/core/types.hpp"

namespace agrimule::farm {

struct PumpState {
    bool on = false;
    double flow_lpm = 5.0;
    double total_delivered_l = 0.0;
    double commanded_remaining_l = 0.0;

    friend bool operator==(const PumpState&, const PumpState&) = default;
};

/// On(q) starts (or re-targets) the pump with q liters to deliver; Off stops it.
/// Throws Error("bad-quantity") for On with q <= 0.
PumpState apply_pump(PumpState pump, const PumpCommand& command);

struct PumpStep {
    PumpState state;
    double delivered_l = 0.0;
    bool self_stopped = false;
};

/// Integrates flow over dt, never exceeding the remaining commanded quantity.
PumpStep run_pump(PumpState pump, Millis dt);

} // namespace agrimule::farm
