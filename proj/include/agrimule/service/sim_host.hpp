#pragma once

#include <atomic>
#include <condition_variable>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <type_traits>

#include "agrimule/scenario/scenario.hpp"
#include "agrimule/service/event_hub.hpp"

namespace agrimule::service {

struct HostOptions {
    /// Simulated milliseconds per wall-clock millisecond; 0 means the clock
    /// only moves through advance().
    double pace = 1.0;
    std::size_t event_backlog = 4096;
};

/// Runs a scenario's kernel on its own thread. Every other thread reaches the
/// scenario through call(), which goes through the kernel's command queue.
class SimHost {
public:
    SimHost(scenario::Scenario& scenario, HostOptions options = {});
    ~SimHost();

    SimHost(const SimHost&) = delete;
    SimHost& operator=(const SimHost&) = delete;

    void start();
    void stop();

    /// Runs f(scenario) on the loop thread and returns its result; exceptions propagate.
    template <typename F>
    auto call(F f) -> std::invoke_result_t<F, scenario::Scenario&> {
        using R = std::invoke_result_t<F, scenario::Scenario&>;
        auto task = std::make_shared<std::packaged_task<R()>>([this, f = std::move(f)]() mutable { return f(scenario_); });
        auto result = task->get_future();
        scenario_.kernel().post_command([task] { (*task)(); });
        wake();
        return result.get();
    }

    /// Manual mode: moves the clock forward by `by` (clamped to the scenario end)
    /// and returns the new time. Throws Error("paced") when pacing is on.
    SimTime advance(Millis by);

    bool finished() const noexcept { return finished_.load(); }
    /// Blocks until the scenario reaches its end time and is finalized.
    void wait_finished();

    EventHub& events() noexcept { return hub_; }
    const HostOptions& options() const noexcept { return options_; }
    scenario::Scenario& scenario() noexcept { return scenario_; }

private:
    void loop();
    void wake();
    void check_end();

    scenario::Scenario& scenario_;
    HostOptions options_;
    EventHub hub_;
    std::uint64_t store_listener_ = 0;

    std::thread thread_;
    std::mutex mutex_;
    std::condition_variable cv_;
    bool stop_ = false;
    bool woken_ = false;
    std::atomic<bool> finished_{false};
    std::condition_variable finished_cv_;
};

} // namespace agrimule::service
