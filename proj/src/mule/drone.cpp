#include "agrimule/mule/drone.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::mule {

Drone::Drone(sim::Kernel& kernel, DroneConfig config, std::vector<DroneStop> stops, Link& uplink, CloudReceiver cloud)
    : kernel_(kernel), config_(config), stops_(std::move(stops)), uplink_(uplink), cloud_(std::move(cloud)) {
    std::vector<Region> regions;
    for (const auto& s : stops_) regions.push_back(s.region);
    plan_ = plan_tour(regions, config_.base, config_.speed_mps);
    state_.position = config_.base;
    state_.target = config_.base;
    state_.speed_mps = config_.speed_mps;
}

const DroneStop& Drone::stop_for(RegionId id) const {
    for (const auto& s : stops_)
        if (s.region.id == id) return s;
    throw Error("unknown-region", std::to_string(id));
}

void Drone::set_state(DroneState next) {
    state_ = std::move(next);
    if (on_state) on_state(state_);
}

std::uint32_t Drone::dispatch() {
    if (busy()) throw Error("busy", std::string("drone is ") + to_string(state_.mode));
    report_ = TourReport{};
    report_.tour_id = next_tour_id_++;
    report_.started = kernel_.now();
    report_.distance_m = plan_.total_length_m;
    start_leg(0);
    return report_.tour_id;
}

void Drone::start_leg(std::size_t index) {
    leg_ = index;
    const TourLeg& leg = plan_.legs[leg_];
    DroneState next = transition(state_, leg.region ? DroneMode::EnRoute : DroneMode::Returning, leg.region);
    next.target = leg.to;
    set_state(std::move(next));
    fly(leg_duration(distance(state_.position, leg.to), config_.speed_mps));
}

void Drone::fly(Millis remaining) {
    const Millis step = std::min(remaining, config_.position_interval);
    kernel_.schedule_in(step, "drone.move", [this, step, remaining] {
        DroneState next = advance_drone(state_, step);
        const Millis left = remaining - step;
        const bool moving = next.mode == DroneMode::EnRoute || (next.mode == DroneMode::Returning && next.position != next.target);
        if (left.count() > 0 && moving) {
            set_state(std::move(next));
            fly(left);
            return;
        }
        if (moving) {
            // Rounding guard: the leg time already covers the distance.
            next.position = next.target;
            next.mode = next.mode == DroneMode::EnRoute ? DroneMode::Associating : next.mode;
            if (next.mode == DroneMode::Returning && next.buffer.empty()) next.mode = DroneMode::Idle;
        }
        set_state(std::move(next));
        arrived();
    });
}

void Drone::arrived() {
    if (state_.mode == DroneMode::Associating) {
        at_region(stop_for(*state_.region));
        return;
    }
    if (state_.mode == DroneMode::Idle) {
        finish_tour();
        return;
    }
    flush_at_base();
}

void Drone::at_region(const DroneStop& stop) {
    send_once(kernel_, *stop.link, Frame{FrameType::Beacon, frame_seq_++, {}}, nullptr, "drone.beacon");
    associate(kernel_, *stop.link, stop.node, frame_seq_++, config_.node_arq, [this, &stop](const AssocOutcome& a) {
        if (!a.session) {
            report_.skipped.push_back(stop.region.id);
            next_leg();
            return;
        }
        set_state(transition(state_, DroneMode::Collecting, stop.region.id));
        collect_region(kernel_, *stop.link, stop.node, *a.session, config_.node_arq,
                       [this, &stop](const CollectOutcome& c) {
                           report_.visited.push_back(stop.region.id);
                           if (!c.complete) report_.incomplete.push_back(stop.region.id);
                           report_.readings_collected += static_cast<std::uint32_t>(c.readings.size());
                           DroneState next = transition(state_, DroneMode::Relaying, stop.region.id);
                           next.buffer.insert(next.buffer.end(), c.readings.begin(), c.readings.end());
                           set_state(std::move(next));
                           relay([this](bool) { next_leg(); });
                       });
    });
}

void Drone::next_leg() { start_leg(leg_ + 1); }

void Drone::relay(std::function<void(bool)> after) {
    if (state_.buffer.empty()) {
        after(true);
        return;
    }
    ++report_.uploads;
    relay_to_cloud(kernel_, uplink_, state_.buffer, frame_seq_++, config_.uplink_arq, cloud_,
                   [this, after = std::move(after)](const RelayOutcome& r) {
                       if (on_relay) on_relay(r);
                       if (r.delivered) {
                           DroneState next = state_;
                           // The batch sent was a prefix of the buffer; anything appended since stays.
                           next.buffer.erase(next.buffer.begin(),
                                             next.buffer.begin() + static_cast<std::ptrdiff_t>(r.count));
                           set_state(std::move(next));
                       } else {
                           ++report_.upload_failures;
                       }
                       after(r.delivered);
                   });
}

void Drone::flush_at_base() {
    relay([this](bool ok) {
        if (!ok) {
            flush_at_base();
            return;
        }
        set_state(transition(state_, DroneMode::Idle));
        finish_tour();
    });
}

void Drone::finish_tour() {
    report_.ended = kernel_.now();
    if (on_tour_done) on_tour_done(report_);
}

} // namespace agrimule::mule
