#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "agrimule/core/time.hpp"
#include "agrimule/sim/rng.hpp"

namespace agrimule::sim {

using EventId = std::uint64_t;
using Action = std::function<void()>;

struct RunReport {
    std::uint64_t events_executed = 0;
    SimTime final_clock;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// One executed event, for replay comparison.
struct TraceEntry {
    EventId id = 0;
    SimTime due;
    std::string target;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Single-threaded discrete-event core. Events with equal due time run in
/// insertion order. The only thread-safe entry point is post_command(); queued
/// commands are drained between events on the loop thread.
class Kernel {
public:
    explicit Kernel(std::uint64_t seed = 0);

    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    SimTime now() const noexcept { return now_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Throws Error("past-event") when due < now().
    EventId schedule(SimTime due, std::string target, Action action);
    EventId schedule_in(Millis delay, std::string target, Action action);

    /// True iff the event was pending. Cancelled events never run.
    bool cancel(EventId id);

    /// Executes every event with due <= t_end; the clock ends at t_end
    /// (or stays put if t_end is already in the past).
    RunReport run_until(SimTime t_end);

    /// Runs events until the queue is empty or `stop` becomes true.
    RunReport run_while(const std::function<bool()>& keep_going, SimTime horizon);

    std::size_t pending() const noexcept { return queue_.size(); }
    std::uint64_t events_executed() const noexcept { return executed_; }

    RngStream rng_stream(std::string_view label) const { return RngStream(seed_, label); }

    /// Thread-safe. The command runs on the loop thread at the current clock.
    void post_command(Action command);
    /// Runs queued commands now; returns how many ran.
    std::size_t drain_commands();

    void enable_trace(bool on) { tracing_ = on; }
    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    struct Key {
        SimTime due;
        std::uint64_t order;
        auto operator<=>(const Key&) const = default;
    };
    struct Pending {
        EventId id;
        std::string target;
        Action action;
    };

    bool step(SimTime limit);

    std::uint64_t seed_;
    SimTime now_{};
    std::uint64_t next_id_ = 1;
    std::uint64_t next_order_ = 0;
    std::uint64_t executed_ = 0;
    std::map<Key, Pending> queue_;
    std::unordered_map<EventId, Key> index_;

    std::mutex command_mutex_;
    std::deque<Action> commands_;

    bool tracing_ = false;
    std::vector<TraceEntry> trace_;
};

} // namespace agrimule::sim
