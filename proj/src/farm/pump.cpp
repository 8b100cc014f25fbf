#include "agrimule/farm/pump.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::farm {

PumpState apply_pump(PumpState pump, const PumpCommand& command) {
    if (command.is_on()) {
        if (!(command.quantity_l > 0.0)) throw Error("bad-quantity", "pump On needs a positive quantity");
        pump.on = true;
        pump.commanded_remaining_l = command.quantity_l;
        return pump;
    }
    pump.on = false;
    pump.commanded_remaining_l = 0.0;
    return pump;
}

PumpStep run_pump(PumpState pump, Millis dt) {
    PumpStep out{pump, 0.0, false};
    if (!pump.on || dt.count() <= 0) return out;
    const double capacity = pump.flow_lpm * static_cast<double>(dt.count()) / 60000.0;
    const double delivered = std::min(capacity, pump.commanded_remaining_l);
    out.delivered_l = delivered;
    out.state.total_delivered_l += delivered;
    out.state.commanded_remaining_l -= delivered;
    if (out.state.commanded_remaining_l <= 1e-9) {
        out.state.commanded_remaining_l = 0.0;
        out.state.on = false;
        out.self_stopped = true;
    }
    return out;
}

} // namespace agrimule::farm
