#include "agrimule/scenario/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace agrimule::scenario {

using nlohmann::ordered_json;

namespace {

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, double p) {
    const auto n = sorted.size();
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    return sorted[std::clamp<std::size_t>(rank, 1, n) - 1];
}

ordered_json per_region(const std::map<RegionId, ordered_json>& m) {
    ordered_json out = ordered_json::object();
    for (const auto& [id, v] : m) out[std::to_string(id)] = v;
    return out;
}

} // namespace

ordered_json build_report(const store::StoreHeader& header, const std::vector<store::Record>& records) {
    std::map<RegionId, ordered_json> readings, decisions, water, skipped;
    std::uint64_t n_readings = 0, n_on = 0, n_off = 0, n_none = 0, n_suppressed = 0, n_overrides = 0;
    std::uint64_t n_tours = 0, n_incomplete = 0, upload_failures = 0, collected = 0;
    std::vector<std::int64_t> latencies;

    for (const auto& rec : records) {
        if (const auto* r = std::get_if<store::ReadingBody>(&rec.body)) {
            ++n_readings;
            auto& v = readings[r->reading.region_id];
            v = v.is_null() ? 1 : v.get<std::uint64_t>() + 1;
        } else if (const auto* d = std::get_if<store::DecisionBody>(&rec.body)) {
            const auto& dec = d->decision;
            auto& v = decisions[dec.region_id];
            if (v.is_null()) v = {{"on", 0}, {"off", 0}, {"no_change", 0}, {"suppressed", 0}};
            const char* key = dec.command == DecisionCommand::On    ? "on"
                              : dec.command == DecisionCommand::Off ? "off"
                                                                    : "no_change";
            v[key] = v[key].get<std::uint64_t>() + 1;
            (dec.command == DecisionCommand::On ? n_on : dec.command == DecisionCommand::Off ? n_off : n_none)++;
            if (dec.suppressed) {
                ++n_suppressed;
                v["suppressed"] = v["suppressed"].get<std::uint64_t>() + 1;
            }
            latencies.push_back(dec.latency.count());
        } else if (const auto* p = std::get_if<store::PumpEventBody>(&rec.body)) {
            water[p->region_id] = p->total_delivered_l;
        } else if (const auto* t = std::get_if<store::TourBody>(&rec.body)) {
            ++n_tours;
            n_incomplete += t->report.incomplete.size();
            upload_failures += t->report.upload_failures;
            collected += t->report.readings_collected;
            for (RegionId id : t->report.skipped) {
                auto& v = skipped[id];
                v = v.is_null() ? 1 : v.get<std::uint64_t>() + 1;
            }
        } else if (std::holds_alternative<store::OverrideBody>(rec.body)) {
            ++n_overrides;
        }
    }

    ordered_json latency = {{"count", latencies.size()}};
    if (!latencies.empty()) {
        std::sort(latencies.begin(), latencies.end());
        const double sum = std::accumulate(latencies.begin(), latencies.end(), 0.0);
        latency["min"] = latencies.front();
        latency["p50"] = nearest_rank(latencies, 50);
        latency["p95"] = nearest_rank(latencies, 95);
        latency["max"] = latencies.back();
        latency["mean"] = sum / static_cast<double>(latencies.size());
    }

    ordered_json report;
    report["scenario"] = header.scenario;
    report["seed"] = header.seed;
    report["duration_ms"] = header.duration_ms;
    report["records"] = records.size();
    report["tours"] = {{"completed", n_tours},
                       {"readings_collected", collected},
                       {"incomplete_visits", n_incomplete},
                       {"upload_failures", upload_failures}};
    report["readings"] = {{"total", n_readings}, {"per_region", per_region(readings)}};
    report["decisions"] = {{"total", n_on + n_off + n_none},
                           {"on", n_on},
                           {"off", n_off},
                           {"no_change", n_none},
                           {"suppressed", n_suppressed},
                           {"per_region", per_region(decisions)}};
    report["overrides"] = n_overrides;
    report["water_delivered_l"] = per_region(water);
    report["latency_ms"] = latency;
    report["skipped_regions"] = per_region(skipped);
    return report;
}

ordered_json build_report(const store::TelemetryStore& store) { return build_report(store.header(), store.records()); }

std::string report_text(const ordered_json& report) { return report.dump(2) + "\n"; }

} // namespace agrimule::scenario
