#include "agrimule/cloud/engine.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::cloud {

DecisionEngine::DecisionEngine(std::vector<Region> regions, std::map<RegionId, IrrigationPolicy> policies,
                               store::TelemetryStore& store, EngineConfig config)
    : regions_(std::move(regions)), store_(store), config_(config) {
    for (const auto& r : regions_) {
        const auto it = policies.find(r.id);
        const IrrigationPolicy p = it == policies.end() ? IrrigationPolicy{} : it->second;
        if (!p.valid()) throw Error("bad-policy", "region " + std::to_string(r.id));
        slots_[r.id] = RegionSlot{p, std::make_shared<HysteresisPolicy>(p), false, std::nullopt};
    }
    // Rebuild dedup state from whatever the store already holds.
    for (const auto& rec : store_.records())
        if (const auto* b = std::get_if<store::ReadingBody>(&rec.body))
            seen_.emplace(b->reading.region_id, b->reading.seq_no);
}

DecisionEngine::RegionSlot& DecisionEngine::slot(RegionId id) {
    const auto it = slots_.find(id);
    if (it == slots_.end()) throw Error("unknown-region", std::to_string(id));
    return it->second;
}

const DecisionEngine::RegionSlot& DecisionEngine::slot(RegionId id) const {
    return const_cast<DecisionEngine*>(this)->slot(id);
}

const Region& DecisionEngine::region(RegionId id) const {
    for (const auto& r : regions_)
        if (r.id == id) return r;
    throw Error("unknown-region", std::to_string(id));
}

IngestResult DecisionEngine::ingest(const mule::Frame& upload, SimTime now) {
    if (upload.type != mule::FrameType::Upload) throw Error("bad-upload", "not an UPLOAD frame");
    std::vector<SensorReading> batch;
    try {
        batch = mule::decode_upload(upload.payload);
    } catch (const Error& e) {
        throw Error("bad-upload", e.what());
    }
    for (const auto& r : batch)
        if (!slots_.contains(r.region_id)) throw Error("bad-upload", "unknown region " + std::to_string(r.region_id));

    IngestResult result;
    std::map<RegionId, SensorReading> newest;
    for (const auto& r : batch) {
        if (!seen_.emplace(r.region_id, r.seq_no).second) {
            ++result.duplicates;
            ++duplicates_rejected_;
            continue;
        }
        ++result.accepted;
        store_.append(now, store::ReadingBody{r, now});
        auto [it, inserted] = newest.emplace(r.region_id, r);
        if (!inserted && std::pair(r.reading_ts, r.seq_no) >= std::pair(it->second.reading_ts, it->second.seq_no))
            it->second = r;
    }

    const SimTime computed_at = now + config_.compute_latency;
    for (const auto& [id, reading] : newest) {
        const RegionSlot& s = slot(id);
        IrrigationDecision d = decide(reading, s.pump_on, *s.rule, s.policy, region(id), computed_at);
        if (s.hold_until && computed_at < *s.hold_until) d.suppressed = true;
        result.decisions.push_back(d);
    }
    result.ack = mule::Frame{mule::FrameType::DataAck, upload.seq,
                             mule::encode_receipt({now, result.accepted, result.duplicates})};
    return result;
}

std::optional<mule::Frame> DecisionEngine::commit(const IrrigationDecision& decision) {
    store_.append(decision.computed_at, store::DecisionBody{decision});
    if (decision.suppressed || decision.command == DecisionCommand::NoChange) return std::nullopt;
    const PumpCommand cmd = decision.command == DecisionCommand::On ? PumpCommand::on(decision.water_quantity_l)
                                                                   : PumpCommand::off();
    return pump_frame(decision.region_id, cmd);
}

void DecisionEngine::set_policy(RegionId region, const IrrigationPolicy& policy) {
    RegionSlot& s = slot(region);
    if (!policy.valid()) throw Error("bad-policy", "need 0 < m_low < m_high < 100 and max_quantity > 0");
    s.policy = policy;
    s.rule = std::make_shared<HysteresisPolicy>(policy);
}

const IrrigationPolicy& DecisionEngine::policy(RegionId region) const { return slot(region).policy; }

void DecisionEngine::set_rule(RegionId region, std::shared_ptr<const PumpPolicy> rule) {
    if (!rule) throw Error("bad-policy", "null rule");
    slot(region).rule = std::move(rule);
}

mule::Frame DecisionEngine::override_pump(RegionId region, const PumpCommand& command, const std::string& operator_id,
                                          SimTime now) {
    RegionSlot& s = slot(region);
    if (command.is_on() && !(command.quantity_l > 0.0)) throw Error("bad-quantity", "On needs a positive quantity");
    s.hold_until = now + config_.override_hold;
    store_.append(now, store::OverrideBody{region, command, operator_id, *s.hold_until});
    return pump_frame(region, command);
}

std::optional<SimTime> DecisionEngine::hold_until(RegionId region) const { return slot(region).hold_until; }

void DecisionEngine::on_pump_status(const mule::PumpStatus& status) {
    const auto it = slots_.find(status.region_id);
    if (it != slots_.end()) it->second.pump_on = status.on;
}

bool DecisionEngine::pump_on(RegionId region) const { return slot(region).pump_on; }

mule::Frame DecisionEngine::pump_frame(RegionId region, const PumpCommand& command) {
    return mule::Frame{mule::FrameType::PumpCmd, frame_seq_++, mule::encode_pump_cmd({region, command})};
}

mule::Frame DecisionEngine::decision_frame(const IrrigationDecision& d) {
    return mule::Frame{mule::FrameType::Decision, frame_seq_++, mule::encode_decision(d)};
}

} // namespace agrimule::cloud
