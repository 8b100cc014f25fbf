#include "agrimule/service/sim_host.hpp"

#include <algorithm>
#include <chrono>

#include "agrimule/error.hpp"

namespace agrimule::service {

SimHost::SimHost(scenario::Scenario& scenario, HostOptions options)
    : scenario_(scenario), options_(options), hub_(options.event_backlog) {
    if (options_.pace < 0) throw Error("bad-pace", "pace must be >= 0");
    for (const auto& r : scenario_.store().records()) hub_.publish(r);
    store_listener_ = scenario_.store().subscribe([this](const store::Record& r) { hub_.publish(r); });
    scenario_.on_drone_state = [this](const mule::DroneState& s) { hub_.publish_drone(s, scenario_.kernel().now()); };
}

SimHost::~SimHost() {
    stop();
    scenario_.store().unsubscribe(store_listener_);
    scenario_.on_drone_state = nullptr;
}

void SimHost::start() {
    if (thread_.joinable()) return;
    scenario_.start();
    thread_ = std::thread([this] { loop(); });
}

void SimHost::stop() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
    hub_.close_all("shutdown");
}

void SimHost::wake() {
    {
        std::lock_guard lock(mutex_);
        woken_ = true;
    }
    cv_.notify_all();
}

void SimHost::check_end() {
    if (finished_ || scenario_.kernel().now() < scenario_.end_time()) return;
    scenario_.finalize();
    {
        std::lock_guard lock(mutex_);
        finished_ = true;
    }
    finished_cv_.notify_all();
}

void SimHost::loop() {
    using clock = std::chrono::steady_clock;
    auto& kernel = scenario_.kernel();
    const auto wall_origin = clock::now();
    const SimTime sim_origin = kernel.now();
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            if (stop_) break;
        }
        kernel.drain_commands();
        if (options_.pace > 0 && !finished_) {
            const double wall_ms = std::chrono::duration<double, std::milli>(clock::now() - wall_origin).count();
            const auto target = std::min(
                scenario_.end_time(), sim_origin + Millis{static_cast<Millis::rep>(wall_ms * options_.pace)});
            if (target > kernel.now()) kernel.run_until(target);
        }
        check_end();
        std::unique_lock lock(mutex_);
        cv_.wait_for(lock, std::chrono::milliseconds(5), [this] { return stop_ || woken_; });
        woken_ = false;
    }
}

SimTime SimHost::advance(Millis by) {
    if (options_.pace > 0) throw Error("paced", "the clock is paced to wall time");
    return call([this, by](scenario::Scenario& s) {
        // Runs inside drain_commands; the kernel is not inside run_until here
        // because the manual loop never calls it.
        const SimTime target = std::min(s.end_time(), s.kernel().now() + by);
        s.kernel().run_until(target);
        check_end();
        return s.kernel().now();
    });
}

void SimHost::wait_finished() {
    std::unique_lock lock(mutex_);
    finished_cv_.wait(lock, [this] { return finished_.load() || stop_; });
}

} // namespace agrimule::service
