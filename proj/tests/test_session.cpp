#include "doctest.h"

#include <set>

#include "agrimule/error.hpp"
#include "agrimule/mule/payloads.hpp"
#include "agrimule/mule/session.hpp"

using namespace agrimule;
using namespace agrimule::mule;

namespace {

std::shared_ptr<SensorNode> make_node(RegionId id, std::uint8_t per_visit = 3) {
    return std::make_shared<SensorNode>(
        id,
        [](SimTime t) {
            SensorReading r;
            r.temperature = 30;
            r.humidity = 20;
            r.soil_moisture = static_cast<double>(t.millis % 100000) / 1000.0;
            return r;
        },
        NodeConfig{per_visit, Millis{1000}});
}

} // namespace

TEST_CASE("node samples on whole seconds and numbers readings") {
    auto node = make_node(4);
    CHECK(node->next_sample_time(SimTime{0}) == SimTime{0});
    CHECK(node->next_sample_time(SimTime{1}) == SimTime{1000});
    CHECK(node->next_sample_time(SimTime{2000}) == SimTime{2000});
    const auto a = node->sample(SimTime{3000});
    const auto b = node->sample(SimTime{4000});
    CHECK(a.region_id == 4);
    CHECK(a.reading_ts == 3);
    CHECK(a.seq_no == 0);
    CHECK(b.seq_no == 1);
}

TEST_CASE("repeated association requests get the same answer") {
    auto node = make_node(1);
    const Frame req{FrameType::AssocReq, 5, encode_assoc_request({1})};
    const auto a = node->on_assoc_request(req);
    const auto b = node->on_assoc_request(req);
    REQUIRE(a);
    CHECK(*a == *b);
    CHECK_FALSE(node->on_assoc_request({FrameType::AssocReq, 5, encode_assoc_request({2})}));
    CHECK_FALSE(node->on_assoc_request({FrameType::Beacon, 5, {}}));
}

TEST_CASE("association and collection over a clean link") {
    sim::Kernel k(1);
    Link link({Millis{100}, Millis{0}, 0.0, {}}, k.rng_stream("n"));
    auto node = make_node(1);
    std::optional<AssocOutcome> assoc;
    associate(k, link, node, 0, {5, Millis{200}}, [&](const AssocOutcome& a) { assoc = a; });
    k.run_until(SimTime{10000});
    REQUIRE(assoc);
    REQUIRE(assoc->session);
    CHECK(assoc->attempts == 1);
    CHECK(assoc->session->readings == 3);
    CHECK(assoc->session->start_seq == 0);
    CHECK(assoc->finished == SimTime{200});

    std::optional<CollectOutcome> got;
    collect_region(k, link, node, *assoc->session, {5, Millis{200}}, [&](const CollectOutcome& c) { got = c; });
    k.run_until(SimTime{20000});
    REQUIRE(got);
    CHECK(got->complete);
    CHECK(got->error.empty());
    CHECK(got->duplicates == 0);
    REQUIRE(got->readings.size() == 3);
    for (std::uint16_t i = 0; i < 3; ++i) CHECK(got->readings[i].seq_no == i);
    // Samples at 10 s, 11 s, 12 s; the last arrives one hop later.
    CHECK(got->readings[0].reading_ts == 10);
    CHECK(got->finished == SimTime{12100});
    CHECK(node->readings_transmitted() == 3);
}

TEST_CASE("association fails on a dead link") {
    sim::Kernel k(2);
    Link link({Millis{100}, Millis{0}, 1.0, {}}, k.rng_stream("n"));
    std::optional<AssocOutcome> assoc;
    associate(k, link, make_node(1), 0, {5, Millis{200}}, [&](const AssocOutcome& a) { assoc = a; });
    k.run_until(SimTime{10000});
    REQUIRE(assoc);
    CHECK_FALSE(assoc->session);
    CHECK(assoc->error == "assoc-failed");
    CHECK(assoc->attempts == 5);
}

TEST_CASE("lossy collection never yields duplicate readings") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        sim::Kernel k(seed);
        Link link({Millis{100}, Millis{0}, 0.3, {}}, k.rng_stream("n"));
        auto node = make_node(1, 5);
        std::optional<CollectOutcome> got;
        collect_region(k, link, node, Session{1, 0, 5, SimTime{0}}, {5, Millis{200}},
                       [&](const CollectOutcome& c) { got = c; });
        k.run_until(SimTime{60000});
        REQUIRE(got);
        std::set<std::uint16_t> seqs;
        for (const auto& r : got->readings) seqs.insert(r.seq_no);
        CHECK(seqs.size() == got->readings.size());
        CHECK(got->complete == (got->readings.size() == 5));
        if (!got->complete) CHECK(got->error == "collect-timeout");
        CHECK(std::is_sorted(got->readings.begin(), got->readings.end(),
                             [](const auto& a, const auto& b) { return a.seq_no < b.seq_no; }));
    }
}

TEST_CASE("collection refuses a session for another region") {
    sim::Kernel k(3);
    Link link({Millis{100}, Millis{0}, 0.0, {}}, k.rng_stream("n"));
    CHECK_THROWS_AS(collect_region(k, link, make_node(1), Session{2, 0, 3, SimTime{0}}, {}, [](const CollectOutcome&) {}),
                    Error);
}

TEST_CASE("relay returns the cloud receipt") {
    sim::Kernel k(4);
    Link uplink({Millis{350}, Millis{0}, 0.0, {}}, k.rng_stream("u"));
    std::vector<SensorReading> batch(3);
    for (std::uint16_t i = 0; i < 3; ++i) {
        batch[i].region_id = 1;
        batch[i].seq_no = i;
    }
    std::optional<RelayOutcome> out;
    relay_to_cloud(
        k, uplink, batch, 9, {5, Millis{1000}},
        [&](const Frame& f) {
            const auto got = decode_upload(f.payload);
            return std::optional<Frame>(
                Frame{FrameType::DataAck, f.seq, encode_receipt({k.now(), static_cast<std::uint16_t>(got.size()), 0})});
        },
        [&](const RelayOutcome& r) { out = r; });
    k.run_until(SimTime{10000});
    REQUIRE(out);
    CHECK(out->delivered);
    CHECK(out->count == 3);
    CHECK(out->receipt->ingest_ts == SimTime{350});
    CHECK(out->receipt->accepted == 3);
    CHECK(out->finished == SimTime{700});
}

TEST_CASE("a silent cloud makes the relay fail after every attempt") {
    sim::Kernel k(5);
    Link uplink({Millis{350}, Millis{0}, 0.0, {}}, k.rng_stream("u"));
    std::optional<RelayOutcome> out;
    relay_to_cloud(k, uplink, {SensorReading{}}, 1, {3, Millis{1000}}, [](const Frame&) { return std::optional<Frame>(); },
                   [&](const RelayOutcome& r) { out = r; });
    k.run_until(SimTime{10000});
    REQUIRE(out);
    CHECK_FALSE(out->delivered);
    CHECK(out->attempts == 3);
}
