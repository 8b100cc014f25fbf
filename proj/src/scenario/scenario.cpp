#include "agrimule/scenario/scenario.hpp"

#include "agrimule/cloud/moisture.hpp"
#include "agrimule/error.hpp"
#include "agrimule/mule/arq.hpp"
#include "agrimule/mule/payloads.hpp"

namespace agrimule::scenario {

namespace {

std::vector<farm::RegionSetup> farm_setup(const ScenarioConfig& c) {
    std::vector<farm::RegionSetup> out;
    for (const auto& rc : c.regions) {
        farm::RegionSetup s;
        s.region = rc.region;
        s.soil = farm::SoilState::with_moisture(rc.region, rc.moisture_pct, rc.dry_rate_k0, rc.temp_coeff, rc.target_pct);
        s.pump.flow_lpm = rc.pump_flow_lpm;
        s.dht22 = c.dht22;
        s.fc28 = {rc.region.calibration, rc.fc28_noise_lsb};
        out.push_back(s);
    }
    return out;
}

std::vector<Region> regions_of(const ScenarioConfig& c) {
    std::vector<Region> out;
    for (const auto& rc : c.regions) out.push_back(rc.region);
    return out;
}

std::map<RegionId, cloud::IrrigationPolicy> policies_of(const ScenarioConfig& c) {
    std::map<RegionId, cloud::IrrigationPolicy> out;
    for (const auto& rc : c.regions) out[rc.region.id] = rc.policy;
    return out;
}

ScenarioConfig checked(ScenarioConfig c) {
    auto issues = validate(c);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

} // namespace

store::StoreHeader header_for(const ScenarioConfig& config) {
    return {config.name, config.seed, static_cast<std::uint64_t>(config.duration.count())};
}

Scenario::Scenario(ScenarioConfig config) : Scenario(config, store::TelemetryStore(header_for(config))) {}

Scenario::Scenario(ScenarioConfig config, store::TelemetryStore store)
    : config_(checked(std::move(config))),
      store_(std::move(store)),
      kernel_(config_.seed),
      farm_(farm_setup(config_), farm::WeatherTrace(config_.weather), config_.seed),
      engine_(regions_of(config_), policies_of(config_), store_, config_.cloud) {
    uplink_ = std::make_unique<mule::Link>(config_.uplink.model, kernel_.rng_stream("link/uplink"));

    std::vector<mule::DroneStop> stops;
    for (const auto& rc : config_.regions) {
        const RegionId id = rc.region.id;
        const std::string suffix = std::to_string(id);
        node_links_[id] =
            std::make_unique<mule::Link>(config_.node_link.model, kernel_.rng_stream("link/node/" + suffix));
        pump_links_[id] =
            std::make_unique<mule::Link>(config_.pump_link.model, kernel_.rng_stream("link/pump/" + suffix));

        const CalibrationCurve curve = rc.region.calibration;
        mule::Sampler sampler = [this, id, curve](SimTime t) {
            const farm::Dht22Sample env = farm_.sample_dht22(id, t);
            const farm::RawSample raw = farm_.sample_fc28(id);
            SensorReading r;
            r.region_id = id;
            r.temperature = env.temperature_c;
            r.humidity = env.humidity_pct;
            r.soil_moisture = cloud::calibrate_moisture(raw, curve);
            return r;
        };
        nodes_[id] = std::make_shared<mule::SensorNode>(id, std::move(sampler), config_.node);
        stops.push_back({rc.region, nodes_[id], node_links_[id].get()});
    }

    mule::DroneConfig dc;
    dc.base = config_.drone.base;
    dc.speed_mps = config_.drone.speed_mps;
    dc.position_interval = config_.drone.position_interval;
    dc.node_arq = config_.node_link.arq;
    dc.uplink_arq = config_.uplink.arq;
    drone_ = std::make_unique<mule::Drone>(kernel_, dc, std::move(stops), *uplink_,
                                           [this](const mule::Frame& f) { return cloud_receive(f); });
    drone_->on_state = [this](const mule::DroneState& s) {
        if (on_drone_state) on_drone_state(s);
    };
    drone_->on_tour_done = [this](const mule::TourReport& r) { store_.append(kernel_.now(), store::TourBody{r}); };
}

SimTime Scenario::end_time() const noexcept { return SimTime{static_cast<std::uint64_t>(config_.duration.count())}; }

void Scenario::start() {
    if (started_) return;
    started_ = true;
    kernel_.schedule(SimTime{0}, "farm.tick", [this] { farm_tick(); });
    if (config_.drone.auto_tours && config_.drone.first_tour < config_.duration)
        kernel_.schedule(SimTime{static_cast<std::uint64_t>(config_.drone.first_tour.count())}, "scenario.tour",
                         [this] { auto_tour(); });
}

sim::RunReport Scenario::run() {
    start();
    const auto report = kernel_.run_until(end_time());
    finalize();
    return report;
}

void Scenario::finalize() {
    if (finalized_) return;
    finalized_ = true;
    for (const auto& rc : config_.regions) log_pump(rc.region.id, "end-of-run");
}

void Scenario::farm_tick() {
    const SimTime t = kernel_.now();
    if (t >= end_time()) return;
    const Millis dt = std::min(config_.soil_step, end_time() - t);
    const auto result = farm_.step(t, dt);
    for (RegionId id : result.self_stopped) {
        log_pump(id, "self-stop");
        pump_status_to_cloud(id);
    }
    kernel_.schedule(t + dt, "farm.tick", [this] { farm_tick(); });
}

void Scenario::auto_tour() {
    if (drone_->busy())
        ++tours_skipped_busy_;
    else
        drone_->dispatch();
    const SimTime next = kernel_.now() + config_.drone.tour_interval;
    if (next < end_time()) kernel_.schedule(next, "scenario.tour", [this] { auto_tour(); });
}

std::optional<mule::Frame> Scenario::cloud_receive(const mule::Frame& upload) {
    cloud::IngestResult result;
    try {
        result = engine_.ingest(upload, kernel_.now());
    } catch (const Error&) {
        return std::nullopt;
    }
    for (const auto& d : result.decisions) {
        kernel_.schedule(d.computed_at, "cloud.decide", [this, d] {
            if (auto cmd = engine_.commit(d)) send_pump(*cmd);
        });
    }
    return result.ack;
}

void Scenario::send_pump(const mule::Frame& cmd) {
    const RegionId region = mule::decode_pump_cmd(cmd.payload).region_id;
    mule::send_reliable(
        kernel_, pump_link(region), cmd, config_.pump_link.arq,
        [this](const mule::Frame& f) { return pump_controller(f); },
        [this](const mule::ArqResult& r) {
            if (r.acked && r.reply) engine_.on_pump_status(mule::decode_pump_status(r.reply->payload));
        },
        "pump." + std::to_string(region));
}

std::optional<mule::Frame> Scenario::pump_controller(const mule::Frame& cmd) {
    mule::PumpOrder order;
    try {
        order = mule::decode_pump_cmd(cmd.payload);
        farm_.region(order.region_id);
    } catch (const Error&) {
        return std::nullopt;
    }
    const RegionId id = order.region_id;
    // A retransmission of the command already applied only gets a fresh status.
    const auto last = last_pump_seq_.find(id);
    if (last == last_pump_seq_.end() || last->second != cmd.seq) {
        last_pump_seq_[id] = cmd.seq;
        farm_.apply_pump(id, order.command);
        log_pump(id, "command");
    }
    const farm::PumpState& p = farm_.pump(id);
    return mule::Frame{mule::FrameType::PumpAck, cmd.seq, mule::encode_pump_status({id, p.on, p.total_delivered_l})};
}

void Scenario::pump_status_to_cloud(RegionId region) {
    const farm::PumpState& p = farm_.pump(region);
    const mule::Frame status{mule::FrameType::PumpAck, status_seq_++,
                             mule::encode_pump_status({region, p.on, p.total_delivered_l})};
    mule::send_once(
        kernel_, pump_link(region), status,
        [this](const mule::Frame& f) { engine_.on_pump_status(mule::decode_pump_status(f.payload)); },
        "pump-status." + std::to_string(region));
}

void Scenario::log_pump(RegionId region, const std::string& cause) {
    const farm::PumpState& p = farm_.pump(region);
    store_.append(kernel_.now(),
                  store::PumpEventBody{region, p.on, p.flow_lpm, p.total_delivered_l, p.commanded_remaining_l, cause});
}

std::uint32_t Scenario::dispatch_drone() { return drone_->dispatch(); }

void Scenario::pump_override(RegionId region, const PumpCommand& command, const std::string& operator_id) {
    send_pump(engine_.override_pump(region, command, operator_id, kernel_.now()));
}

void Scenario::set_policy(RegionId region, const cloud::IrrigationPolicy& policy) {
    engine_.set_policy(region, policy);
}

mule::Link& Scenario::node_link(RegionId region) {
    const auto it = node_links_.find(region);
    if (it == node_links_.end()) throw Error("unknown-region", std::to_string(region));
    return *it->second;
}

mule::Link& Scenario::pump_link(RegionId region) {
    const auto it = pump_links_.find(region);
    if (it == pump_links_.end()) throw Error("unknown-region", std::to_string(region));
    return *it->second;
}

const mule::SensorNode& Scenario::node(RegionId region) const {
    const auto it = nodes_.find(region);
    if (it == nodes_.end()) throw Error("unknown-region", std::to_string(region));
    return *it->second;
}

std::uint64_t Scenario::readings_transmitted() const {
    std::uint64_t n = 0;
    for (const auto& [id, node] : nodes_) n += node->readings_transmitted();
    return n;
}

} // namespace agrimule::scenario
