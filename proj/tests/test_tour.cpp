#include "doctest.h"

#include <cmath>

#include "agrimule/error.hpp"
#include "agrimule/mule/drone.hpp"
#include "agrimule/mule/payloads.hpp"
#include "agrimule/mule/tour.hpp"

using namespace agrimule;
using namespace agrimule::mule;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

Region region_at(RegionId id, Vec2 p) {
    Region r;
    r.id = id;
    r.name = "Region " + std::to_string(id);
    r.position = p;
    return r;
}

Sampler constant_sampler(double moisture) {
    return [moisture](SimTime) {
        SensorReading r;
        r.temperature = 30;
        r.humidity = 20;
        r.soil_moisture = moisture;
        return r;
    };
}

/// Two regions, their nodes and links, and a cloud that acks every upload.
struct Rig {
    sim::Kernel kernel{7};
    Link node_link1{{Millis{100}, Millis{0}, 0.0, {}}, kernel.rng_stream("n1")};
    Link node_link2{{Millis{100}, Millis{0}, 0.0, {}}, kernel.rng_stream("n2")};
    Link uplink{{Millis{350}, Millis{0}, 0.0, {}}, kernel.rng_stream("up")};
    std::vector<SensorReading> received;
    std::vector<SimTime> upload_times;
    std::unique_ptr<Drone> drone;
    std::vector<TourReport> reports;
    std::vector<DroneMode> modes;

    Rig() {
        auto n1 = std::make_shared<SensorNode>(1, constant_sampler(25));
        auto n2 = std::make_shared<SensorNode>(2, constant_sampler(60));
        std::vector<DroneStop> stops{{region_at(1, {120, 40}), n1, &node_link1}, {region_at(2, {120, 140}), n2, &node_link2}};
        DroneConfig dc;
        dc.base = {0, 0};
        dc.speed_mps = 5;
        drone = std::make_unique<Drone>(kernel, dc, stops, uplink, [this](const Frame& f) {
            const auto batch = decode_upload(f.payload);
            received.insert(received.end(), batch.begin(), batch.end());
            upload_times.push_back(kernel.now());
            return std::optional<Frame>(
                Frame{FrameType::DataAck, f.seq, encode_receipt({kernel.now(), static_cast<std::uint16_t>(batch.size()), 0})});
        });
        drone->on_tour_done = [this](const TourReport& r) { reports.push_back(r); };
        drone->on_state = [this](const DroneState& s) {
            if (modes.empty() || modes.back() != s.mode) modes.push_back(s.mode);
        };
    }
};

} // namespace

TEST_CASE("tour plan follows config order and returns to base") {
    const std::vector<Region> regions{region_at(1, {3, 4}), region_at(2, {3, 10})};
    const FlightPlan plan = plan_tour(regions, {0, 0}, 2.0);
    REQUIRE(plan.legs.size() == 3);
    CHECK(plan.legs[0].region == RegionId{1});
    CHECK(plan.legs[0].distance_m == doctest::Approx(5.0));
    CHECK(plan.legs[1].distance_m == doctest::Approx(6.0));
    CHECK_FALSE(plan.legs[2].region);
    CHECK(plan.legs[2].distance_m == doctest::Approx(std::sqrt(9.0 + 100.0)));
    CHECK(plan.total_length_m == doctest::Approx(11.0 + std::sqrt(109.0)));
    CHECK(plan.legs[1].eta_s == doctest::Approx(5.5));
    CHECK(error_code([&] { plan_tour(std::span<const Region>{}, {0, 0}, 1.0); }) == "empty-tour");
    CHECK(error_code([&] { plan_tour(regions, {0, 0}, 0.0); }) == "bad-speed");
}

TEST_CASE("leg durations round up to whole milliseconds") {
    CHECK(leg_duration(10.0, 5.0) == Millis{2000});
    CHECK(leg_duration(10.001, 5.0) == Millis{2001});
    CHECK(leg_duration(std::hypot(120.0, 40.0), 5.0) == Millis{25299});
    CHECK(leg_duration(0.0, 5.0) == Millis{0});
}

TEST_CASE("drone mode transition table") {
    using M = DroneMode;
    const M all[] = {M::Idle, M::EnRoute, M::Associating, M::Collecting, M::Relaying, M::Returning};
    int legal = 0;
    for (M a : all)
        for (M b : all) legal += is_legal_transition(a, b);
    CHECK(legal == 9);
    CHECK(is_legal_transition(M::Idle, M::EnRoute));
    CHECK(is_legal_transition(M::Associating, M::EnRoute));
    CHECK(is_legal_transition(M::Relaying, M::Returning));
    CHECK_FALSE(is_legal_transition(M::Idle, M::Collecting));
    CHECK_FALSE(is_legal_transition(M::Collecting, M::EnRoute));
    CHECK(error_code([] { transition({}, M::Relaying); }) == "illegal-transition");

    DroneState s;
    s.mode = M::Returning;
    s.buffer.push_back({});
    CHECK(error_code([&] { transition(s, M::Idle); }) == "illegal-transition");
}

TEST_CASE("advance_drone moves at speed and arrives exactly") {
    DroneState s;
    s.mode = DroneMode::EnRoute;
    s.region = 1;
    s.target = {10, 0};
    s.speed_mps = 4;
    s = advance_drone(s, Millis{1000});
    CHECK(s.position.x == doctest::Approx(4.0));
    CHECK(s.mode == DroneMode::EnRoute);
    s = advance_drone(s, Millis{1500});
    CHECK(s.position == Vec2{10, 0});
    CHECK(s.mode == DroneMode::Associating);

    DroneState back;
    back.mode = DroneMode::Returning;
    back.position = {1, 0};
    back.speed_mps = 5;
    back.buffer.push_back({});
    back = advance_drone(back, Millis{1000});
    CHECK(back.mode == DroneMode::Returning);
    back.buffer.clear();
    CHECK(advance_drone(back, Millis{1}).mode == DroneMode::Idle);
}

TEST_CASE("a full tour collects three readings per region and relays them") {
    Rig rig;
    CHECK(rig.drone->dispatch() == 1);
    CHECK(rig.drone->state().mode == DroneMode::EnRoute);
    CHECK(error_code([&] { rig.drone->dispatch(); }) == "busy");
    rig.kernel.run_until(SimTime{600000});

    REQUIRE(rig.reports.size() == 1);
    const TourReport& r = rig.reports[0];
    CHECK(r.tour_id == 1);
    CHECK(r.visited == std::vector<RegionId>{1, 2});
    CHECK(r.skipped.empty());
    CHECK(r.incomplete.empty());
    CHECK(r.readings_collected == 6);
    CHECK(r.uploads == 2);
    CHECK(r.upload_failures == 0);
    CHECK(rig.received.size() == 6);
    CHECK(rig.drone->state().mode == DroneMode::Idle);
    CHECK(rig.drone->state().position == Vec2{0, 0});
    CHECK(rig.drone->state().buffer.empty());
    CHECK(r.distance_m == doctest::Approx(std::hypot(120.0, 40.0) + 100.0 + std::hypot(120.0, 140.0)));

    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rig.received[i].region_id == 1);
        CHECK(rig.received[i].seq_no == i);
        CHECK(rig.received[i + 3].region_id == 2);
    }
    // Newest reading of a visit reaches the cloud one node hop plus one uplink hop after it was taken.
    CHECK(rig.upload_times[0] == SimTime::from_seconds(rig.received[2].reading_ts) + Millis{450});

    using M = DroneMode;
    CHECK(rig.modes == std::vector<M>{M::EnRoute, M::Associating, M::Collecting, M::Relaying, M::EnRoute,
                                     M::Associating, M::Collecting, M::Relaying, M::Returning, M::Idle});
    CHECK_NOTHROW(rig.drone->dispatch());
}

TEST_CASE("an unreachable region is skipped and the tour continues") {
    Rig rig;
    rig.node_link1.model().loss_prob = 1.0;
    rig.drone->dispatch();
    rig.kernel.run_until(SimTime{600000});
    REQUIRE(rig.reports.size() == 1);
    CHECK(rig.reports[0].skipped == std::vector<RegionId>{1});
    CHECK(rig.reports[0].visited == std::vector<RegionId>{2});
    CHECK(rig.received.size() == 3);
}

TEST_CASE("readings survive an uplink outage and are flushed at base") {
    Rig rig;
    rig.uplink.model().outages = {{SimTime{0}, SimTime{120000}}};
    rig.drone->dispatch();
    rig.kernel.run_until(SimTime{900000});
    REQUIRE(rig.reports.size() == 1);
    CHECK(rig.reports[0].upload_failures >= 1);
    CHECK(rig.received.size() == 6);
    CHECK(rig.drone->state().mode == DroneMode::Idle);
}
