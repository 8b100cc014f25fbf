#pragma once

#include <cstdint>
#include <vector>

#include "agrimule/core/types.hpp"
#include "agrimule/farm/pump.hpp"
#include "agrimule/farm/sensors.hpp"
#include "agrimule/farm/soil.hpp"
#include "agrimule/farm/weather.hpp"
#include "agrimule/sim/rng.hpp"

namespace agrimule::farm {

struct RegionSetup {
    Region region;
    SoilState soil;
    PumpState pump;
    Dht22Model dht22;
    Fc28Model fc28;
};

/// Ground truth for every region: soil, pump and the sensors that observe them.
class Farm {
public:
    Farm(std::vector<RegionSetup> regions, WeatherTrace weather, std::uint64_t seed);

    const Region& region(RegionId id) const;
    const SoilState& soil(RegionId id) const;
    const PumpState& pump(RegionId id) const;
    std::vector<RegionId> region_ids() const;
    const WeatherTrace& weather() const noexcept { return weather_; }

    Dht22Sample sample_dht22(RegionId id, SimTime t);
    RawSample sample_fc28(RegionId id);

    PumpState apply_pump(RegionId id, const PumpCommand& command);

    struct StepResult {
        std::vector<RegionId> self_stopped;
    };
    /// Advances every region by dt using the weather at t.
    StepResult step(SimTime t, Millis dt);

private:
    struct Slot {
        RegionSetup setup;
        sim::RngStream dht_rng;
        sim::RngStream fc_rng;
    };
    Slot& slot(RegionId id);
    const Slot& slot(RegionId id) const;

    std::vector<Slot> slots_;
    WeatherTrace weather_;
};

} // namespace agrimule::farm
