#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agrimule/mule/tour.hpp"
#include "agrimule/store/record.hpp"

namespace agrimule::service {

/// One NDJSON line per store record, e.g.
/// {"at":1450,"body":{...},"kind":"reading","offset":3}
std::string record_event(const store::Record& r);
/// Live-only drone event carrying the offset of the last record published before it.
std::string drone_event(const mule::DroneState& s, SimTime at, std::optional<std::uint64_t> after);
std::string close_event(const std::string& reason);

/// Fan-out of the event stream to HTTP subscribers. Record events are kept
/// so a client can resume from its last offset; drone positions are not.
/// A subscriber that falls more than `backlog` events behind is closed with
/// reason "slow-consumer".
class EventHub {
public:
    explicit EventHub(std::size_t backlog = 4096) : backlog_(backlog) {}

    void publish(const store::Record& r);
    void publish_drone(const mule::DroneState& s, SimTime at);

    struct Subscription;
    /// Receives every record with offset > after (all records if nullopt), then live events.
    std::shared_ptr<Subscription> subscribe(std::optional<std::uint64_t> after);
    void unsubscribe(const std::shared_ptr<Subscription>& sub);

    /// Record lines with offset > after, in offset order.
    std::vector<std::string> history(std::optional<std::uint64_t> after) const;

    /// Waits up to `wait` for events. Returns the pending lines; `closed` is set
    /// once the stream is over (the close line is the last one returned).
    std::vector<std::string> next(const std::shared_ptr<Subscription>& sub, std::chrono::milliseconds wait,
                                  bool& closed);

    /// Ends every stream with the given reason; later subscriptions start closed.
    void close_all(const std::string& reason);

    std::size_t subscribers() const;

    struct Subscription {
        std::deque<std::string> queue;
        std::size_t limit = 0;
        bool closed = false;
    };

private:
    void push(Subscription& sub, std::string line);

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::size_t backlog_;
    std::vector<std::pair<std::uint64_t, std::string>> records_;
    std::vector<std::shared_ptr<Subscription>> subs_;
    std::optional<std::string> shutdown_;
};

} // namespace agrimule::service
