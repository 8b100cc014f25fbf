#include "agrimule/scenario/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace agrimule::scenario {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& i : issues) out += (out.empty() ? "" : "; ") + i;
    return out;
}

/// Reads optional fields, collecting type errors instead of throwing.
class Reader {
public:
    explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

    template <typename T>
    void get(const json& obj, const std::string& key, const std::string& path, T& out) {
        if (!obj.is_object() || !obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            issues_.push_back(path + "." + key + ": wrong type");
        }
    }

    void millis(const json& obj, const std::string& key, const std::string& path, Millis& out, double scale) {
        if (!obj.is_object() || !obj.contains(key)) return;
        double v = 0.0;
        get(obj, key, path, v);
        out = Millis{static_cast<Millis::rep>(std::llround(v * scale))};
    }

    void vec2(const json& obj, const std::string& key, const std::string& path, Vec2& out) {
        if (!obj.is_object() || !obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            issues_.push_back(path + "." + key + ": expected [x, y]");
            return;
        }
        out = {v[0].get<double>(), v[1].get<double>()};
    }

    std::vector<std::string>& issues_;
};

void read_link(Reader& rd, const json& j, const std::string& path, LinkConfig& link) {
    if (!j.is_object()) return;
    rd.millis(j, "latency_ms", path, link.model.latency, 1.0);
    rd.millis(j, "jitter_ms", path, link.model.jitter, 1.0);
    rd.get(j, "loss_prob", path, link.model.loss_prob);
    rd.get(j, "max_attempts", path, link.arq.max_attempts);
    rd.millis(j, "timeout_ms", path, link.arq.timeout, 1.0);
    if (j.contains("outages_s")) {
        const json& o = j.at("outages_s");
        if (!o.is_array()) {
            rd.issues_.push_back(path + ".outages_s: expected [[start, end], ...]");
            return;
        }
        for (std::size_t i = 0; i < o.size(); ++i) {
            if (!o[i].is_array() || o[i].size() != 2 || !o[i][0].is_number() || !o[i][1].is_number()) {
                rd.issues_.push_back(path + ".outages_s[" + std::to_string(i) + "]: expected [start, end]");
                continue;
            }
            link.model.outages.emplace_back(SimTime{static_cast<std::uint64_t>(o[i][0].get<double>() * 1000)},
                                            SimTime{static_cast<std::uint64_t>(o[i][1].get<double>() * 1000)});
        }
    }
}

void check_link(std::vector<std::string>& issues, const LinkConfig& l, const std::string& path) {
    if (l.model.latency.count() < 0) issues.push_back(path + ".latency_ms: must be >= 0");
    if (l.model.jitter.count() < 0) issues.push_back(path + ".jitter_ms: must be >= 0");
    if (!(l.model.loss_prob >= 0.0 && l.model.loss_prob <= 1.0)) issues.push_back(path + ".loss_prob: must be in [0, 1]");
    if (l.arq.max_attempts < 1) issues.push_back(path + ".max_attempts: must be >= 1");
    if (l.arq.timeout.count() <= 0) issues.push_back(path + ".timeout_ms: must be > 0");
    else if (l.arq.timeout < 2 * l.model.latency)
        issues.push_back(path + ".timeout_ms: must be >= 2 * latency_ms (round trip)");
    for (std::size_t i = 0; i < l.model.outages.size(); ++i)
        if (!(l.model.outages[i].first < l.model.outages[i].second))
            issues.push_back(path + ".outages_s[" + std::to_string(i) + "]: start must be < end");
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error("validation", join_issues(issues)), issues_(std::move(issues)) {}

std::vector<std::string> validate(const ScenarioConfig& c) {
    std::vector<std::string> issues;
    if (c.duration.count() <= 0) issues.push_back("duration_s: must be > 0");
    if (c.soil_step.count() <= 0) issues.push_back("soil_step_ms: must be > 0");

    if (c.regions.empty()) issues.push_back("regions: at least one region is required");
    std::set<int> ids;
    for (std::size_t i = 0; i < c.regions.size(); ++i) {
        const auto& rc = c.regions[i];
        const auto& r = rc.region;
        const std::string p = "regions[" + std::to_string(i) + "]";
        if (!ids.insert(r.id).second) issues.push_back(p + ".id: duplicate region id " + std::to_string(r.id));
        if (r.name.empty()) issues.push_back(p + ".name: must not be empty");
        if (!(r.area_m2 > 0)) issues.push_back(p + ".area_m2: must be > 0");
        if (!(r.root_depth_m > 0)) issues.push_back(p + ".root_depth_m: must be > 0");
        if (!(r.bulk_density >= 800 && r.bulk_density <= 2000))
            issues.push_back(p + ".bulk_density_kg_m3: must be in [800, 2000]");
        if (!r.calibration.valid()) issues.push_back(p + ".calibration: need 0 <= wet_raw < dry_raw <= 1023");
        if (rc.fc28_noise_lsb < 0) issues.push_back(p + ".fc28_noise_lsb: must be >= 0");
        if (!(rc.moisture_pct >= 0 && rc.moisture_pct <= 100)) issues.push_back(p + ".soil.moisture_pct: must be in [0, 100]");
        if (!(rc.target_pct > 0 && rc.target_pct < 100)) issues.push_back(p + ".soil.target_pct: must be in (0, 100)");
        if (rc.dry_rate_k0 < 0) issues.push_back(p + ".soil.dry_rate_pct_per_h: must be >= 0");
        if (!(rc.pump_flow_lpm > 0)) issues.push_back(p + ".pump.flow_lpm: must be > 0");
        const auto& pol = rc.policy;
        if (!(pol.m_low > 0)) issues.push_back(p + ".policy.m_low: must be > 0");
        if (!(pol.m_low < pol.m_high))
            issues.push_back(p + ".policy.m_low: must be < m_high (" + json(pol.m_low).dump() +
                             " >= " + json(pol.m_high).dump() + ")");
        if (!(pol.m_high < 100)) issues.push_back(p + ".policy.m_high: must be < 100");
        if (!(pol.max_quantity_l > 0)) issues.push_back(p + ".policy.max_quantity_l: must be > 0");
    }

    if (c.weather.empty()) {
        issues.push_back("weather: at least one point is required");
    } else {
        for (std::size_t i = 0; i < c.weather.size(); ++i) {
            const auto h = c.weather[i].value.humidity_pct;
            if (!(h >= 0 && h <= 100))
                issues.push_back("weather[" + std::to_string(i) + "].humidity_pct: must be in [0, 100]");
            if (i > 0 && !(c.weather[i - 1].at < c.weather[i].at))
                issues.push_back("weather[" + std::to_string(i) + "].t_s: times must strictly increase");
        }
        if (c.weather.front().at.millis != 0 || c.weather.back().at.millis < static_cast<std::uint64_t>(c.duration.count()))
            issues.push_back("weather: trace must cover [0, duration_s]");
    }

    if (c.node.readings_per_visit < 1) issues.push_back("sensors.readings_per_visit: must be >= 1");
    if (c.node.sample_interval.count() <= 0 || c.node.sample_interval.count() % 1000 != 0)
        issues.push_back("sensors.sample_interval_ms: must be a positive multiple of 1000");
    if (c.dht22.sigma_temperature < 0) issues.push_back("sensors.dht22_sigma_c: must be >= 0");
    if (c.dht22.sigma_humidity < 0) issues.push_back("sensors.dht22_sigma_rh: must be >= 0");

    check_link(issues, c.node_link, "links.node");
    check_link(issues, c.uplink, "links.uplink");
    check_link(issues, c.pump_link, "links.pump");

    if (c.cloud.compute_latency.count() < 0) issues.push_back("cloud.compute_latency_ms: must be >= 0");
    if (c.cloud.override_hold.count() < 0) issues.push_back("cloud.override_hold_s: must be >= 0");

    if (!(c.drone.speed_mps > 0)) issues.push_back("drone.speed_mps: must be > 0");
    if (c.drone.position_interval.count() <= 0) issues.push_back("drone.position_interval_ms: must be > 0");
    if (c.drone.tour_interval.count() <= 0) issues.push_back("drone.tour_interval_s: must be > 0");
    if (c.drone.first_tour.count() < 0) issues.push_back("drone.first_tour_s: must be >= 0");
    if (c.service.port < 0 || c.service.port > 65535) issues.push_back("service.port: must be in [0, 65535]");
    return issues;
}

ScenarioConfig parse_config(const json& j) {
    std::vector<std::string> issues;
    if (!j.is_object()) throw ConfigError({"<root>: expected an object"});
    Reader rd(issues);
    ScenarioConfig c;
    rd.get(j, "name", "<root>", c.name);
    rd.get(j, "seed", "<root>", c.seed);
    rd.millis(j, "duration_s", "<root>", c.duration, 1000.0);
    rd.millis(j, "soil_step_ms", "<root>", c.soil_step, 1.0);

    if (j.contains("regions")) {
        const json& regions = j.at("regions");
        if (!regions.is_array()) issues.push_back("regions: expected an array");
        for (std::size_t i = 0; regions.is_array() && i < regions.size(); ++i) {
            const json& r = regions[i];
            const std::string p = "regions[" + std::to_string(i) + "]";
            RegionConfig rc;
            int id = static_cast<int>(i + 1);
            rd.get(r, "id", p, id);
            if (id < 0 || id > 255) issues.push_back(p + ".id: must be in [0, 255]");
            rc.region.id = static_cast<RegionId>(id);
            rc.region.name = "Region " + std::to_string(id);
            rd.get(r, "name", p, rc.region.name);
            rd.vec2(r, "position_m", p, rc.region.position);
            rd.get(r, "area_m2", p, rc.region.area_m2);
            rd.get(r, "root_depth_m", p, rc.region.root_depth_m);
            rd.get(r, "bulk_density_kg_m3", p, rc.region.bulk_density);
            rd.get(r, "fc28_noise_lsb", p, rc.fc28_noise_lsb);
            if (r.contains("calibration")) {
                rd.get(r["calibration"], "dry_raw", p + ".calibration", rc.region.calibration.dry_raw);
                rd.get(r["calibration"], "wet_raw", p + ".calibration", rc.region.calibration.wet_raw);
            }
            if (r.contains("soil")) {
                const json& s = r["soil"];
                rd.get(s, "moisture_pct", p + ".soil", rc.moisture_pct);
                rd.get(s, "target_pct", p + ".soil", rc.target_pct);
                rd.get(s, "dry_rate_pct_per_h", p + ".soil", rc.dry_rate_k0);
                rd.get(s, "temp_coeff_per_c", p + ".soil", rc.temp_coeff);
            }
            if (r.contains("pump")) rd.get(r["pump"], "flow_lpm", p + ".pump", rc.pump_flow_lpm);
            if (r.contains("policy")) {
                const json& pol = r["policy"];
                rd.get(pol, "m_low", p + ".policy", rc.policy.m_low);
                rd.get(pol, "m_high", p + ".policy", rc.policy.m_high);
                rd.get(pol, "max_quantity_l", p + ".policy", rc.policy.max_quantity_l);
            }
            c.regions.push_back(std::move(rc));
        }
    }

    if (j.contains("weather")) {
        const json& w = j.at("weather");
        if (!w.is_array()) issues.push_back("weather: expected an array");
        for (std::size_t i = 0; w.is_array() && i < w.size(); ++i) {
            const std::string p = "weather[" + std::to_string(i) + "]";
            double t_s = 0.0;
            farm::WeatherPoint pt;
            rd.get(w[i], "t_s", p, t_s);
            rd.get(w[i], "temperature_c", p, pt.value.temperature_c);
            rd.get(w[i], "humidity_pct", p, pt.value.humidity_pct);
            pt.at = SimTime{static_cast<std::uint64_t>(std::llround(t_s * 1000.0))};
            c.weather.push_back(pt);
        }
    }

    if (j.contains("sensors")) {
        const json& s = j.at("sensors");
        rd.get(s, "dht22_sigma_c", "sensors", c.dht22.sigma_temperature);
        rd.get(s, "dht22_sigma_rh", "sensors", c.dht22.sigma_humidity);
        int per_visit = c.node.readings_per_visit;
        rd.get(s, "readings_per_visit", "sensors", per_visit);
        if (per_visit < 0 || per_visit > 255) issues.push_back("sensors.readings_per_visit: must be in [1, 255]");
        c.node.readings_per_visit = static_cast<std::uint8_t>(std::clamp(per_visit, 0, 255));
        rd.millis(s, "sample_interval_ms", "sensors", c.node.sample_interval, 1.0);
    }

    if (j.contains("links")) {
        const json& l = j.at("links");
        if (l.contains("node")) read_link(rd, l["node"], "links.node", c.node_link);
        if (l.contains("uplink")) read_link(rd, l["uplink"], "links.uplink", c.uplink);
        if (l.contains("pump")) read_link(rd, l["pump"], "links.pump", c.pump_link);
    }

    if (j.contains("cloud")) {
        rd.millis(j["cloud"], "compute_latency_ms", "cloud", c.cloud.compute_latency, 1.0);
        rd.millis(j["cloud"], "override_hold_s", "cloud", c.cloud.override_hold, 1000.0);
    }

    if (j.contains("drone")) {
        const json& d = j.at("drone");
        rd.vec2(d, "base_m", "drone", c.drone.base);
        rd.get(d, "speed_mps", "drone", c.drone.speed_mps);
        rd.millis(d, "position_interval_ms", "drone", c.drone.position_interval, 1.0);
        rd.get(d, "auto_tours", "drone", c.drone.auto_tours);
        rd.millis(d, "first_tour_s", "drone", c.drone.first_tour, 1000.0);
        rd.millis(d, "tour_interval_s", "drone", c.drone.tour_interval, 1000.0);
    }

    if (j.contains("service")) {
        rd.get(j["service"], "host", "service", c.service.host);
        rd.get(j["service"], "port", "service", c.service.port);
    }

    if (issues.empty()) issues = validate(c);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io-error", "cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("<root>: not valid JSON: ") + e.what()});
    }
    return parse_config(j);
}

namespace {

nlohmann::ordered_json link_json(const LinkConfig& l) {
    nlohmann::ordered_json j = {{"latency_ms", l.model.latency.count()},
                                {"jitter_ms", l.model.jitter.count()},
                                {"loss_prob", l.model.loss_prob},
                                {"max_attempts", l.arq.max_attempts},
                                {"timeout_ms", l.arq.timeout.count()}};
    if (!l.model.outages.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [a, b] : l.model.outages) arr.push_back({a.seconds(), b.seconds()});
        j["outages_s"] = arr;
    }
    return j;
}

} // namespace

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["duration_s"] = static_cast<double>(c.duration.count()) / 1000.0;
    j["soil_step_ms"] = c.soil_step.count();
    auto regions = nlohmann::ordered_json::array();
    for (const auto& rc : c.regions) {
        const auto& r = rc.region;
        regions.push_back({{"id", r.id},
                           {"name", r.name},
                           {"position_m", {r.position.x, r.position.y}},
                           {"area_m2", r.area_m2},
                           {"root_depth_m", r.root_depth_m},
                           {"bulk_density_kg_m3", r.bulk_density},
                           {"calibration", {{"dry_raw", r.calibration.dry_raw}, {"wet_raw", r.calibration.wet_raw}}},
                           {"fc28_noise_lsb", rc.fc28_noise_lsb},
                           {"soil",
                            {{"moisture_pct", rc.moisture_pct},
                             {"target_pct", rc.target_pct},
                             {"dry_rate_pct_per_h", rc.dry_rate_k0},
                             {"temp_coeff_per_c", rc.temp_coeff}}},
                           {"pump", {{"flow_lpm", rc.pump_flow_lpm}}},
                           {"policy",
                            {{"m_low", rc.policy.m_low},
                             {"m_high", rc.policy.m_high},
                             {"max_quantity_l", rc.policy.max_quantity_l}}}});
    }
    j["regions"] = regions;
    auto weather = nlohmann::ordered_json::array();
    for (const auto& p : c.weather)
        weather.push_back(
            {{"t_s", p.at.seconds()}, {"temperature_c", p.value.temperature_c}, {"humidity_pct", p.value.humidity_pct}});
    j["weather"] = weather;
    j["sensors"] = {{"dht22_sigma_c", c.dht22.sigma_temperature},
                    {"dht22_sigma_rh", c.dht22.sigma_humidity},
                    {"readings_per_visit", c.node.readings_per_visit},
                    {"sample_interval_ms", c.node.sample_interval.count()}};
    j["links"] = {{"node", link_json(c.node_link)}, {"uplink", link_json(c.uplink)}, {"pump", link_json(c.pump_link)}};
    j["cloud"] = {{"compute_latency_ms", c.cloud.compute_latency.count()},
                  {"override_hold_s", static_cast<double>(c.cloud.override_hold.count()) / 1000.0}};
    j["drone"] = {{"base_m", {c.drone.base.x, c.drone.base.y}},
                  {"speed_mps", c.drone.speed_mps},
                  {"position_interval_ms", c.drone.position_interval.count()},
                  {"auto_tours", c.drone.auto_tours},
                  {"first_tour_s", static_cast<double>(c.drone.first_tour.count()) / 1000.0},
                  {"tour_interval_s", static_cast<double>(c.drone.tour_interval.count()) / 1000.0}};
    j["service"] = {{"host", c.service.host}, {"port", c.service.port}};
    return j;
}

ScenarioConfig default_config() {
    ScenarioConfig c;
    c.name = "riyadh-two-region";
    c.seed = 7;
    c.duration = Millis{6 * 3600 * 1000};

    RegionConfig r1;
    r1.region = {1, "Region 1", {120.0, 40.0}, 10.0, 0.3, 1300.0, {}};
    r1.moisture_pct = 31.0;
    r1.dry_rate_k0 = 0.6;
    r1.pump_flow_lpm = 10.0;
    r1.policy = {30.0, 45.0, 800.0};
    RegionConfig r2 = r1;
    r2.region = {2, "Region 2", {120.0, 140.0}, 12.0, 0.3, 1350.0, {}};
    r2.moisture_pct = 38.0;
    c.regions = {r1, r2};

    // Hourly July-like conditions starting at 08:00: hot, very dry afternoon.
    const double temps[] = {34, 37, 40, 42, 44, 45, 45};
    const double hums[] = {18, 15, 12, 10, 9, 8, 8};
    for (int h = 0; h <= 6; ++h)
        c.weather.push_back({SimTime::from_seconds(static_cast<std::uint64_t>(h) * 3600), {temps[h], hums[h]}});
    return c;
}

} // namespace agrimule::scenario
