#include "agrimule/farm/farm.hpp"

#include <algorithm>
#include <string>

#include "agrimule/error.hpp"

namespace agrimule::farm {

Farm::Farm(std::vector<RegionSetup> regions, WeatherTrace weather, std::uint64_t seed)
    : weather_(std::move(weather)) {
    slots_.reserve(regions.size());
    for (auto& r : regions) {
        const std::string id = std::to_string(r.region.id);
        if (std::any_of(slots_.begin(), slots_.end(),
                        [&](const Slot& s) { return s.setup.region.id == r.region.id; }))
            throw Error("duplicate-region", id);
        slots_.push_back(Slot{std::move(r), sim::RngStream(seed, "dht22/" + id), sim::RngStream(seed, "fc28/" + id)});
    }
}

Farm::Slot& Farm::slot(RegionId id) {
    for (auto& s : slots_)
        if (s.setup.region.id == id) return s;
    throw Error("unknown-region", std::to_string(id));
}

const Farm::Slot& Farm::slot(RegionId id) const {
    return const_cast<Farm*>(this)->slot(id);
}

const Region& Farm::region(RegionId id) const { return slot(id).setup.region; }
const SoilState& Farm::soil(RegionId id) const { return slot(id).setup.soil; }
const PumpState& Farm::pump(RegionId id) const { return slot(id).setup.pump; }

std::vector<RegionId> Farm::region_ids() const {
    std::vector<RegionId> ids;
    for (const auto& s : slots_) ids.push_back(s.setup.region.id);
    return ids;
}

Dht22Sample Farm::sample_dht22(RegionId id, SimTime t) {
    auto& s = slot(id);
    return farm::sample_dht22(weather_, t, s.setup.dht22, s.dht_rng);
}

RawSample Farm::sample_fc28(RegionId id) {
    auto& s = slot(id);
    return farm::sample_fc28(s.setup.soil.moisture_pct(), s.setup.fc28, s.fc_rng);
}

PumpState Farm::apply_pump(RegionId id, const PumpCommand& command) {
    auto& s = slot(id);
    s.setup.pump = farm::apply_pump(s.setup.pump, command);
    return s.setup.pump;
}

Farm::StepResult Farm::step(SimTime t, Millis dt) {
    StepResult result;
    const Weather w = weather_.at(t);
    for (auto& s : slots_) {
        const PumpStep p = run_pump(s.setup.pump, dt);
        s.setup.pump = p.state;
        s.setup.soil = step_soil(s.setup.soil, dt, w, p.delivered_l);
        if (p.self_stopped) result.self_stopped.push_back(s.setup.region.id);
    }
    return result;
}

} // namespace agrimule::farm
