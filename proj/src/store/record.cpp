#include "agrimule/store/record.hpp"

#include "agrimule/error.hpp"

namespace agrimule::store {

using nlohmann::json;

const char* to_string(RecordKind k) noexcept {
    switch (k) {
    case RecordKind::Reading: return "reading";
    case RecordKind::Decision: return "decision";
    case RecordKind::PumpEvent: return "pump";
    case RecordKind::TourReport: return "tour";
    case RecordKind::Override: return "override";
    }
    return "?";
}

RecordKind record_kind_from_string(const std::string& s) {
    for (auto k : {RecordKind::Reading, RecordKind::Decision, RecordKind::PumpEvent, RecordKind::TourReport,
                   RecordKind::Override})
        if (s == to_string(k)) return k;
    throw Error("bad-kind", s);
}

std::optional<RegionId> Record::region() const noexcept {
    return std::visit(
        [](const auto& b) -> std::optional<RegionId> {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ReadingBody>)
                return b.reading.region_id;
            else if constexpr (std::is_same_v<T, DecisionBody>)
                return b.decision.region_id;
            else if constexpr (std::is_same_v<T, TourBody>)
                return std::nullopt;
            else
                return b.region_id;
        },
        body);
}

namespace {

json body_json(const ReadingBody& b) {
    const auto& r = b.reading;
    return {{"region", r.region_id},     {"seq", r.seq_no},           {"ts_s", r.reading_ts},
            {"temperature_c", r.temperature}, {"humidity_pct", r.humidity}, {"soil_moisture_pct", r.soil_moisture},
            {"ingest_ms", b.ingest_ts.millis}};
}

json body_json(const DecisionBody& b) {
    const auto& d = b.decision;
    return {{"region", d.region_id},
            {"command", to_string(d.command)},
            {"quantity_l", d.water_quantity_l},
            {"source_seq", d.source_reading.seq_no},
            {"computed_at_ms", d.computed_at.millis},
            {"latency_ms", d.latency.count()},
            {"suppressed", d.suppressed}};
}

json body_json(const PumpEventBody& b) {
    return {{"region", b.region_id},
            {"on", b.on},
            {"flow_lpm", b.flow_lpm},
            {"total_delivered_l", b.total_delivered_l},
            {"commanded_remaining_l", b.commanded_remaining_l},
            {"cause", b.cause}};
}

json body_json(const TourBody& b) {
    const auto& t = b.report;
    return {{"tour_id", t.tour_id},
            {"started_ms", t.started.millis},
            {"ended_ms", t.ended.millis},
            {"visited", t.visited},
            {"skipped", t.skipped},
            {"incomplete", t.incomplete},
            {"readings_collected", t.readings_collected},
            {"uploads", t.uploads},
            {"upload_failures", t.upload_failures},
            {"distance_m", t.distance_m}};
}

json body_json(const OverrideBody& b) {
    return {{"region", b.region_id},
            {"command", b.command.is_on() ? "on" : "off"},
            {"quantity_l", b.command.quantity_l},
            {"operator", b.operator_id},
            {"hold_until_ms", b.hold_until.millis}};
}

RecordBody body_from(RecordKind kind, const json& j) {
    switch (kind) {
    case RecordKind::Reading: {
        ReadingBody b;
        b.reading.region_id = j.at("region").get<RegionId>();
        b.reading.seq_no = j.at("seq").get<std::uint16_t>();
        b.reading.reading_ts = j.at("ts_s").get<std::uint32_t>();
        b.reading.temperature = j.at("temperature_c").get<double>();
        b.reading.humidity = j.at("humidity_pct").get<double>();
        b.reading.soil_moisture = j.at("soil_moisture_pct").get<double>();
        b.ingest_ts = SimTime{j.at("ingest_ms").get<std::uint64_t>()};
        return b;
    }
    case RecordKind::Decision: {
        DecisionBody b;
        auto& d = b.decision;
        d.region_id = j.at("region").get<RegionId>();
        d.command = decision_command_from_string(j.at("command").get<std::string>());
        d.water_quantity_l = j.at("quantity_l").get<double>();
        d.source_reading = {d.region_id, j.at("source_seq").get<std::uint16_t>()};
        d.computed_at = SimTime{j.at("computed_at_ms").get<std::uint64_t>()};
        d.latency = Millis{j.at("latency_ms").get<std::int64_t>()};
        d.suppressed = j.at("suppressed").get<bool>();
        return b;
    }
    case RecordKind::PumpEvent: {
        PumpEventBody b;
        b.region_id = j.at("region").get<RegionId>();
        b.on = j.at("on").get<bool>();
        b.flow_lpm = j.at("flow_lpm").get<double>();
        b.total_delivered_l = j.at("total_delivered_l").get<double>();
        b.commanded_remaining_l = j.at("commanded_remaining_l").get<double>();
        b.cause = j.at("cause").get<std::string>();
        return b;
    }
    case RecordKind::TourReport: {
        TourBody b;
        auto& t = b.report;
        t.tour_id = j.at("tour_id").get<std::uint32_t>();
        t.started = SimTime{j.at("started_ms").get<std::uint64_t>()};
        t.ended = SimTime{j.at("ended_ms").get<std::uint64_t>()};
        t.visited = j.at("visited").get<std::vector<RegionId>>();
        t.skipped = j.at("skipped").get<std::vector<RegionId>>();
        t.incomplete = j.at("incomplete").get<std::vector<RegionId>>();
        t.readings_collected = j.at("readings_collected").get<std::uint32_t>();
        t.uploads = j.at("uploads").get<std::uint32_t>();
        t.upload_failures = j.at("upload_failures").get<std::uint32_t>();
        t.distance_m = j.at("distance_m").get<double>();
        return b;
    }
    case RecordKind::Override: {
        OverrideBody b;
        b.region_id = j.at("region").get<RegionId>();
        const auto cmd = j.at("command").get<std::string>();
        b.command = cmd == "on" ? PumpCommand::on(j.at("quantity_l").get<double>()) : PumpCommand::off();
        b.operator_id = j.at("operator").get<std::string>();
        b.hold_until = SimTime{j.at("hold_until_ms").get<std::uint64_t>()};
        return b;
    }
    }
    throw Error("bad-record", "unknown kind");
}

} // namespace

json to_json(const Record& r) {
    return {{"offset", r.offset},
            {"at", r.at.millis},
            {"kind", to_string(r.kind())},
            {"body", std::visit([](const auto& b) { return body_json(b); }, r.body)}};
}

Record record_from_json(const json& j) {
    try {
        Record r;
        r.offset = j.at("offset").get<std::uint64_t>();
        r.at = SimTime{j.at("at").get<std::uint64_t>()};
        r.body = body_from(record_kind_from_string(j.at("kind").get<std::string>()), j.at("body"));
        return r;
    } catch (const json::exception& e) {
        throw Error("bad-record", e.what());
    }
}

} // namespace agrimule::store
