#include "doctest.h"

#include <cmath>
#include <functional>

#include "agrimule/error.hpp"
#include "agrimule/farm/farm.hpp"

using namespace agrimule;
using namespace agrimule::farm;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

Region lab_region(RegionId id = 1) {
    Region r;
    r.id = id;
    r.name = "Region " + std::to_string(id);
    r.area_m2 = 16;
    r.root_depth_m = 0.25;
    r.bulk_density = 1250;
    return r;
}

} // namespace

TEST_CASE("weather interpolates linearly between points") {
    WeatherTrace w({{SimTime{0}, {30, 20}}, {SimTime{3600000}, {40, 10}}});
    CHECK(w.at(SimTime{0}).temperature_c == 30);
    CHECK(w.at(SimTime{1800000}).temperature_c == doctest::Approx(35));
    CHECK(w.at(SimTime{900000}).humidity_pct == doctest::Approx(17.5));
    CHECK(w.at(SimTime{3600000}).humidity_pct == 10);
    CHECK(error_code([&] { w.at(SimTime{3600001}); }) == "no-weather");
}

TEST_CASE("weather traces reject bad input") {
    CHECK(error_code([] { WeatherTrace({}); }) == "bad-weather");
    CHECK(error_code([] { WeatherTrace({{SimTime{0}, {20, 101}}}); }) == "bad-weather");
    CHECK(error_code([] { WeatherTrace({{SimTime{5}, {20, 50}}, {SimTime{5}, {21, 50}}}); }) == "bad-weather");
}

TEST_CASE("ADC samples clamp to 10 bits on a 5 V reference") {
    CHECK(RawSample::from_adc(-4).adc_raw == 0);
    CHECK(RawSample::from_adc(5000).adc_raw == 1023);
    CHECK(RawSample::from_adc(1023).voltage == doctest::Approx(5.0));
    CHECK(RawSample::from_adc(0).voltage == 0.0);
}

TEST_CASE("FC28 ideal counts follow the calibration line") {
    const CalibrationCurve c;
    CHECK(fc28_ideal_adc(0, c) == 850);
    CHECK(fc28_ideal_adc(100, c) == 350);
    CHECK(fc28_ideal_adc(25, c) == 725);
    CHECK(fc28_ideal_adc(45, c) == 625);
    sim::RngStream rng(1, "fc");
    for (int i = 0; i < 1000; ++i) {
        const int raw = sample_fc28(50, {c, 2}, rng).adc_raw;
        CHECK((raw >= 598 && raw <= 602));
    }
    CHECK(sample_fc28(50, {c, 0}, rng).adc_raw == 600);
}

TEST_CASE("DHT22 humidity stays within 0..100 under heavy noise") {
    auto w = WeatherTrace::constant({45, 1}, SimTime{1000});
    sim::RngStream rng(2, "dht");
    for (int i = 0; i < 2000; ++i) {
        const auto s = sample_dht22(w, SimTime{0}, {0.5, 10.0}, rng);
        CHECK((s.humidity_pct >= 0.0 && s.humidity_pct <= 100.0));
    }
}

TEST_CASE("drying loss matches the rate law by hand") {
    SoilState s = SoilState::with_moisture(lab_region(), 30, 1.0, 0.02);
    // k0 = 1 %/h, T = 35 °C -> 1.2, H = 25 % -> 0.75, 2 h -> 1.8 %.
    CHECK(drying_loss_pct(s, Millis{7200000}, {35, 25}) == doctest::Approx(1.8));
    // Cold enough to stop evaporation entirely.
    CHECK(drying_loss_pct(s, Millis{7200000}, {-30, 25}) == 0.0);
    const SoilState next = step_soil(s, Millis{7200000}, {35, 25}, 0.0);
    CHECK(next.moisture_pct() == doctest::Approx(28.2));
}

TEST_CASE("delivered water raises moisture by liters over dry mass") {
    const Region r = lab_region();
    CHECK(r.dry_soil_mass_kg() == 5000.0);
    SoilState s = SoilState::with_moisture(r, 25);
    s = step_soil(s, Millis{1000}, {25, 50}, 1000.0);
    CHECK(s.moisture_pct() == 45.0);
    CHECK(s.gained_kg == 1000.0);
}

TEST_CASE("soil water saturates at the dry mass and records runoff") {
    SoilState s = SoilState::with_moisture(lab_region(), 99);
    s = step_soil(s, Millis{1000}, {25, 50}, 100.0);
    CHECK(s.moisture_pct() == 100.0);
    CHECK(s.runoff_kg == doctest::Approx(50.0));
    CHECK(error_code([&] { step_soil(s, Millis{0}, {25, 50}, 0.0); }) == "bad-step");
}

TEST_CASE("pump delivers exactly the commanded quantity, then stops itself") {
    PumpState p;
    p.flow_lpm = 15;
    p = apply_pump(p, PumpCommand::on(1000));
    double delivered = 0;
    int steps = 0;
    bool stopped = false;
    while (!stopped) {
        const auto st = run_pump(p, Millis{1000});
        p = st.state;
        delivered += st.delivered_l;
        stopped = st.self_stopped;
        ++steps;
    }
    CHECK(steps == 4000);
    CHECK(delivered == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(p.total_delivered_l == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK_FALSE(p.on);
    CHECK(run_pump(p, Millis{1000}).delivered_l == 0.0);
}

TEST_CASE("a non-integral quantity is clipped on the last tick") {
    PumpState p;
    p.flow_lpm = 6; // 0.1 L/s
    p = apply_pump(p, PumpCommand::on(0.25));
    auto a = run_pump(p, Millis{1000});
    auto b = run_pump(a.state, Millis{1000});
    auto c = run_pump(b.state, Millis{1000});
    CHECK(a.delivered_l + b.delivered_l + c.delivered_l == doctest::Approx(0.25));
    CHECK(c.self_stopped);
}

TEST_CASE("pump commands validate and Off clears the remainder") {
    PumpState p;
    CHECK(error_code([&] { apply_pump(p, PumpCommand::on(0)); }) == "bad-quantity");
    CHECK(error_code([&] { apply_pump(p, PumpCommand::on(-1)); }) == "bad-quantity");
    p = apply_pump(p, PumpCommand::on(10));
    p = apply_pump(p, PumpCommand::off());
    CHECK_FALSE(p.on);
    CHECK(p.commanded_remaining_l == 0.0);
}

TEST_CASE("farm steps every region and reports self-stops") {
    RegionSetup a{lab_region(1), SoilState::with_moisture(lab_region(1), 25), {}, {}, {}};
    RegionSetup b{lab_region(2), SoilState::with_moisture(lab_region(2), 60), {}, {}, {}};
    a.pump.flow_lpm = 60;
    Farm f({a, b}, WeatherTrace::constant({25, 50}, SimTime{100000}), 7);
    CHECK(f.region_ids() == std::vector<RegionId>{1, 2});
    f.apply_pump(1, PumpCommand::on(2.0));
    CHECK(f.step(SimTime{0}, Millis{1000}).self_stopped.empty());
    CHECK(f.step(SimTime{1000}, Millis{1000}).self_stopped == std::vector<RegionId>{1});
    CHECK(f.soil(1).water_kg == doctest::Approx(1252.0));
    CHECK(f.soil(2).moisture_pct() == 60.0);
    CHECK(error_code([&] { f.pump(9); }) == "unknown-region");
    CHECK(error_code([&] { Farm({a, a}, WeatherTrace::constant({25, 50}, SimTime{1}), 1); }) == "duplicate-region");
}

TEST_CASE("farm sensor streams are reproducible per seed") {
    RegionSetup a{lab_region(1), SoilState::with_moisture(lab_region(1), 25), {}, {}, {}};
    auto run = [&](std::uint64_t seed) {
        Farm f({a}, WeatherTrace::constant({25, 50}, SimTime{100000}), seed);
        std::vector<double> out;
        for (int i = 0; i < 10; ++i) {
            out.push_back(f.sample_dht22(1, SimTime{0}).temperature_c);
            out.push_back(f.sample_fc28(1).adc_raw);
        }
        return out;
    };
    CHECK(run(4) == run(4));
    CHECK(run(4) != run(5));
}
