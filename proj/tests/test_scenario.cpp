#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "agrimule/error.hpp"
#include "agrimule/scenario/config.hpp"
#include "agrimule/scenario/report.hpp"
#include "agrimule/scenario/scenario.hpp"

using namespace agrimule;
using namespace agrimule::scenario;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kScenarios = std::string(AGRIMULE_SOURCE_DIR) + "/scenarios/";

json default_json() {
    std::ifstream in(kScenarios + "default.json");
    return json::parse(in);
}

std::vector<std::string> issues_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    for (const auto& i : issues)
        if (i.find(needle) != std::string::npos) return true;
    return false;
}

fs::path temp_path(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("agrimule-scn-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("the checked-in scenarios parse and validate") {
    const auto d = load_config(kScenarios + "default.json");
    CHECK(d.seed == 7);
    REQUIRE(d.regions.size() == 2);
    CHECK(d.regions[0].region.name == "Region 1");
    CHECK(d.regions[1].region.name == "Region 2");
    CHECK(d.node_link.model.latency == Millis{100});
    CHECK(d.uplink.model.latency == Millis{350});
    CHECK(d.cloud.compute_latency == Millis{50});
    CHECK(validate(d).empty());
    CHECK(validate(load_config(kScenarios + "lab_two_region.json")).empty());
    CHECK(validate(default_config()).empty());
}

TEST_CASE("config survives a to_json / parse round trip") {
    const auto d = load_config(kScenarios + "default.json");
    const auto again = parse_config(json::parse(to_json(d).dump()));
    CHECK(to_json(again).dump() == to_json(d).dump());
}

TEST_CASE("m_low above m_high is reported with the field path") {
    json j = default_json();
    j["regions"][1]["policy"]["m_low"] = 50;
    const auto issues = issues_of(j);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].rfind("regions[1].policy.m_low", 0) == 0);
}

TEST_CASE("every violated constraint is itemized") {
    json j = default_json();
    j["duration_s"] = 30000; // past the weather trace
    j["regions"][0]["calibration"]["wet_raw"] = 900;
    j["regions"][1]["id"] = 1;
    j["sensors"]["sample_interval_ms"] = 1500;
    j["links"]["node"]["loss_prob"] = 1.5;
    j["links"]["uplink"]["timeout_ms"] = 500;
    j["drone"]["speed_mps"] = 0;
    const auto issues = issues_of(j);
    CHECK(mentions(issues, "weather: trace must cover"));
    CHECK(mentions(issues, "regions[0].calibration"));
    CHECK(mentions(issues, "regions[1].id: duplicate"));
    CHECK(mentions(issues, "sensors.sample_interval_ms"));
    CHECK(mentions(issues, "links.node.loss_prob"));
    CHECK(mentions(issues, "links.uplink.timeout_ms"));
    CHECK(mentions(issues, "drone.speed_mps"));
    CHECK(issues.size() == 7);
}

TEST_CASE("type errors name the field") {
    json j = default_json();
    j["regions"][0]["soil"]["moisture_pct"] = "wet";
    j["drone"]["base_m"] = 3;
    const auto issues = issues_of(j);
    CHECK(mentions(issues, "regions[0].soil.moisture_pct: wrong type"));
    CHECK(mentions(issues, "drone.base_m: expected [x, y]"));
    CHECK(issues_of(json::array()).size() == 1);
}

TEST_CASE("missing or malformed config files") {
    CHECK_THROWS_AS(load_config(kScenarios + "nope.json"), Error);
    const auto bad = temp_path("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad), ConfigError);
}

TEST_CASE("default scenario: two regions, readings every tour, half-second latency") {
    Scenario s(load_config(kScenarios + "default.json"));
    s.run();
    const auto report = build_report(s.store());
    CHECK(report["tours"]["completed"] == 24);
    CHECK(report["readings"]["per_region"]["1"] == 72);
    CHECK(report["readings"]["per_region"]["2"] == 72);
    CHECK(report["latency_ms"]["p50"] == 500);
    CHECK(report["latency_ms"]["min"] == 500);
    CHECK(report["latency_ms"]["max"] == 500);
    CHECK(report["skipped_regions"].empty());
    CHECK(s.engine().regions().size() == 2);
}

TEST_CASE("decisions track the true soil under drying") {
    Scenario s(load_config(kScenarios + "default.json"));
    s.run();
    const auto report = build_report(s.store());
    // Region 1 starts just above m_low and dries; it is irrigated once.
    CHECK(report["decisions"]["per_region"]["1"]["on"] == 1);
    CHECK(report["decisions"]["per_region"]["2"]["on"] == 0);
    CHECK(s.farm().pump(1).total_delivered_l > 0.0);
    CHECK(s.farm().pump(2).total_delivered_l == 0.0);
}

TEST_CASE("soil water balance closes over a run") {
    auto cfg = load_config(kScenarios + "default.json");
    Scenario s(cfg);
    s.run();
    for (const auto& rc : cfg.regions) {
        const auto& soil = s.farm().soil(rc.region.id);
        const double initial = rc.moisture_pct * rc.region.dry_soil_mass_kg() / 100.0;
        // gained = pump water; the remainder is evaporation (runoff is zero here).
        CHECK(soil.gained_kg == doctest::Approx(s.farm().pump(rc.region.id).total_delivered_l));
        CHECK(soil.runoff_kg == 0.0);
        CHECK(soil.water_kg <= initial + soil.gained_kg);
    }
}

TEST_CASE("same config and seed: identical stores and reports; another seed differs") {
    const auto cfg = load_config(kScenarios + "default.json");
    Scenario a(cfg), b(cfg);
    a.run();
    b.run();
    CHECK(a.store().records() == b.store().records());
    CHECK(report_text(build_report(a.store())) == report_text(build_report(b.store())));
    auto other = cfg;
    other.seed = 8;
    Scenario c(other);
    c.run();
    CHECK(c.store().records() != a.store().records());
}

TEST_CASE("replaying the log reproduces the report") {
    const auto cfg = load_config(kScenarios + "default.json");
    const auto path = temp_path("replay.log");
    std::string original;
    {
        Scenario s(cfg, store::TelemetryStore::create(path, header_for(cfg)));
        s.run();
        original = report_text(build_report(s.store()));
    }
    CHECK(report_text(build_report(store::TelemetryStore::open(path))) == original);
}

TEST_CASE("a truncated final line changes at most the last record") {
    const auto cfg = load_config(kScenarios + "lab_two_region.json");
    const auto path = temp_path("torn.log");
    std::vector<store::Record> full;
    {
        Scenario s(cfg, store::TelemetryStore::create(path, header_for(cfg)));
        s.run();
        full = s.store().records();
    }
    fs::resize_file(path, fs::file_size(path) - 7);
    const auto reopened = store::TelemetryStore::open(path);
    CHECK(reopened.records().size() == full.size() - 1);
    CHECK(std::equal(reopened.records().begin(), reopened.records().end(), full.begin()));
}

TEST_CASE("an empty log gives an empty report") {
    const auto path = temp_path("empty.log");
    std::ofstream(path, std::ios::trunc).close();
    const auto report = build_report(store::TelemetryStore::open(path));
    CHECK(report["records"] == 0);
    CHECK(report["readings"]["total"] == 0);
    CHECK(report["latency_ms"]["count"] == 0);
    CHECK_FALSE(report["latency_ms"].contains("p50"));
}

TEST_CASE("operator override reaches the pump and holds automation") {
    auto cfg = load_config(kScenarios + "lab_two_region.json");
    cfg.drone.auto_tours = false;
    Scenario s(cfg);
    s.start();
    s.kernel().run_until(SimTime{5000});
    s.pump_override(2, PumpCommand::on(30), "tester");
    s.kernel().run_until(SimTime{6000});
    CHECK(s.farm().pump(2).on);
    CHECK(s.engine().pump_on(2));
    const auto events = s.store().query(2, store::RecordKind::PumpEvent, SimTime{0}, SimTime{6000});
    REQUIRE(events.size() == 1);
    CHECK(std::get<store::PumpEventBody>(events[0].body).cause == "command");

    s.kernel().run_until(SimTime{200000});
    CHECK(s.farm().pump(2).total_delivered_l == doctest::Approx(30.0));
    CHECK_FALSE(s.engine().pump_on(2));

    // Region 1 is dry, but the tour's On decision is suppressed while the hold lasts.
    s.pump_override(1, PumpCommand::off(), "tester");
    s.dispatch_drone();
    s.kernel().run_until(SimTime{400000});
    const auto decisions = s.store().query(1, store::RecordKind::Decision, SimTime{0}, SimTime{400000});
    REQUIRE(decisions.size() == 1);
    CHECK(std::get<store::DecisionBody>(decisions[0].body).decision.suppressed);
    CHECK_FALSE(s.farm().pump(1).on);
    CHECK_THROWS_AS(s.pump_override(9, PumpCommand::off(), "tester"), Error);
}

TEST_CASE("dispatch while touring is busy; completed tours are stored") {
    auto cfg = load_config(kScenarios + "lab_two_region.json");
    cfg.drone.auto_tours = false;
    Scenario s(cfg);
    s.start();
    CHECK(s.dispatch_drone() == 1);
    try {
        s.dispatch_drone();
        FAIL("expected busy");
    } catch (const Error& e) {
        CHECK(e.code() == "busy");
    }
    s.kernel().run_until(SimTime{300000});
    const auto tours = s.store().query(std::nullopt, store::RecordKind::TourReport, SimTime{0}, SimTime{300000});
    REQUIRE(tours.size() == 1);
    CHECK(std::get<store::TourBody>(tours[0].body).report.readings_collected == 6);
}

TEST_CASE("auto tours skip a slot while the drone is still out") {
    auto cfg = load_config(kScenarios + "lab_two_region.json");
    cfg.drone.tour_interval = Millis{30000}; // shorter than one tour
    cfg.duration = Millis{600000};
    Scenario s(cfg);
    s.run();
    CHECK(s.tours_skipped_busy() > 0);
    const auto report = build_report(s.store());
    CHECK(report["tours"]["completed"].get<int>() > 0);
}

TEST_CASE("lossy links never produce duplicate ingestions") {
    auto cfg = load_config(kScenarios + "default.json");
    cfg.node_link.model.loss_prob = 0.2;
    cfg.uplink.model.loss_prob = 0.2;
    cfg.pump_link.model.loss_prob = 0.2;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.seed = seed;
        Scenario s(cfg);
        s.run();
        std::set<std::pair<int, int>> seen;
        for (const auto& r : s.store().records())
            if (const auto* b = std::get_if<store::ReadingBody>(&r.body))
                CHECK(seen.emplace(b->reading.region_id, b->reading.seq_no).second);
        CHECK(seen.size() <= s.readings_transmitted());
    }
}
