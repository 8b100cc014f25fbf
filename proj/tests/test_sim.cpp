#include "doctest.h"

#include <set>
#include <thread>

#include "agrimule/error.hpp"
#include "agrimule/sim/kernel.hpp"
#include "agrimule/sim/rng.hpp"

using namespace agrimule;
using namespace agrimule::sim;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST_CASE("empty queue, run to 1000 ms: zero events and the clock ends at 1000") {
    Kernel k(1);
    const auto r = k.run_until(SimTime{1000});
    CHECK(r.events_executed == 0);
    CHECK(r.final_clock == SimTime{1000});
    CHECK(k.now() == SimTime{1000});
}

TEST_CASE("events run in time order") {
    Kernel k;
    std::vector<int> order;
    k.schedule(SimTime{30}, "c", [&] { order.push_back(3); });
    k.schedule(SimTime{10}, "a", [&] { order.push_back(1); });
    k.schedule(SimTime{20}, "b", [&] { order.push_back(2); });
    k.run_until(SimTime{100});
    CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("equal due times run in insertion order") {
    Kernel k;
    std::vector<std::string> order;
    k.schedule(SimTime{5}, "A", [&] { order.push_back("A"); });
    k.schedule(SimTime{5}, "B", [&] { order.push_back("B"); });
    k.schedule(SimTime{5}, "C", [&] {
        order.push_back("C");
        k.schedule(SimTime{5}, "D", [&] { order.push_back("D"); });
    });
    k.run_until(SimTime{5});
    CHECK(order == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("scheduling in the past is rejected") {
    Kernel k;
    k.run_until(SimTime{100});
    CHECK(error_code([&] { k.schedule(SimTime{99}, "late", [] {}); }) == "past-event");
    CHECK_NOTHROW(k.schedule(SimTime{100}, "now", [] {}));
}

TEST_CASE("cancelled events never run") {
    Kernel k;
    int ran = 0;
    const auto id = k.schedule(SimTime{10}, "x", [&] { ++ran; });
    k.schedule(SimTime{10}, "y", [&] { ++ran; });
    CHECK(k.cancel(id));
    CHECK_FALSE(k.cancel(id));
    CHECK(k.run_until(SimTime{20}).events_executed == 1);
    CHECK(ran == 1);
}

TEST_CASE("run_until leaves later events pending") {
    Kernel k;
    k.schedule(SimTime{10}, "a", [] {});
    k.schedule(SimTime{11}, "b", [] {});
    CHECK(k.run_until(SimTime{10}).events_executed == 1);
    CHECK(k.pending() == 1);
    CHECK(k.run_until(SimTime{11}).events_executed == 1);
}

TEST_CASE("clock never moves backward over a random schedule") {
    Kernel k(3);
    auto rng = k.rng_stream("schedule");
    SimTime last{0};
    bool monotone = true;
    std::function<void()> spawn = [&] {
        if (k.now() < last) monotone = false;
        last = k.now();
        if (rng.bernoulli(0.6)) k.schedule_in(Millis{rng.uniform_int(0, 50)}, "spawn", spawn);
    };
    for (int i = 0; i < 200; ++i) k.schedule(SimTime{static_cast<std::uint64_t>(rng.uniform_int(0, 1000))}, "seed", spawn);
    k.run_until(SimTime{100000});
    CHECK(monotone);
    CHECK(k.pending() == 0);
}

TEST_CASE("same seed and schedule give identical traces") {
    auto run = [](std::uint64_t seed) {
        Kernel k(seed);
        k.enable_trace(true);
        auto rng = k.rng_stream("jobs");
        std::function<void()> job = [&] {
            if (k.now().millis < 5000) k.schedule_in(Millis{rng.uniform_int(1, 100)}, "job", job);
        };
        k.schedule(SimTime{0}, "job", job);
        const auto report = k.run_until(SimTime{6000});
        return std::make_pair(report, k.trace());
    };
    const auto a = run(9);
    const auto b = run(9);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(run(10).second != a.second);
}

TEST_CASE("commands posted from another thread run on the loop between events") {
    Kernel k;
    std::vector<std::uint64_t> seen;
    std::thread t([&] {
        for (int i = 0; i < 100; ++i) k.post_command([&] { seen.push_back(k.now().millis); });
    });
    t.join();
    k.schedule(SimTime{50}, "e", [] {});
    k.run_until(SimTime{100});
    REQUIRE(seen.size() == 100);
    for (auto at : seen) CHECK(at == 0);
}

TEST_CASE("commands drained after the last event run at the new clock, not in the past") {
    Kernel k;
    k.run_until(SimTime{1000});
    k.post_command([&] { k.schedule_in(Millis{0}, "cmd", [] {}); });
    SimTime ran_at{};
    k.post_command([&] { ran_at = k.now(); });
    k.run_until(SimTime{2000});
    CHECK(ran_at == SimTime{1000});
    CHECK(k.now() == SimTime{2000});
}

TEST_CASE("rng streams are keyed by seed and label") {
    RngStream a(7, "fc28/1"), b(7, "fc28/1"), c(7, "fc28/2"), d(8, "fc28/1");
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(stream_key(7, "a") != stream_key(7, "b"));
}

TEST_CASE("rng helpers stay in range") {
    RngStream r(1, "range");
    std::set<int> seen;
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
        const int v = r.uniform_int(-2, 2);
        CHECK((v >= -2 && v <= 2));
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
    CHECK(r.normal(3.0, 0.0) == 3.0);
    CHECK_FALSE(r.bernoulli(0.0));
    CHECK(r.bernoulli(1.0));
}
