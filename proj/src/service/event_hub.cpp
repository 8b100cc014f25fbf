#include "agrimule/service/event_hub.hpp"

#include <algorithm>

#include "json.hpp"

namespace agrimule::service {

using nlohmann::json;

std::string record_event(const store::Record& r) { return store::to_json(r).dump(); }

std::string drone_event(const mule::DroneState& s, SimTime at, std::optional<std::uint64_t> after) {
    json body = {{"mode", mule::to_string(s.mode)},
                 {"x", s.position.x},
                 {"y", s.position.y},
                 {"region", s.region ? json(*s.region) : json(nullptr)},
                 {"buffered", s.buffer.size()}};
    return json{{"kind", "drone-position"},
                {"at", at.millis},
                {"offset", nullptr},
                {"after", after ? json(*after) : json(nullptr)},
                {"body", body}}
        .dump();
}

std::string close_event(const std::string& reason) { return json{{"kind", "close"}, {"reason", reason}}.dump(); }

void EventHub::push(Subscription& sub, std::string line) {
    if (sub.closed) return;
    if (sub.queue.size() >= sub.limit) {
        sub.queue.clear();
        sub.queue.push_back(close_event("slow-consumer"));
        sub.closed = true;
        return;
    }
    sub.queue.push_back(std::move(line));
}

void EventHub::publish(const store::Record& r) {
    std::string line = record_event(r);
    {
        std::lock_guard lock(mutex_);
        records_.emplace_back(r.offset, line);
        for (auto& s : subs_) push(*s, line);
    }
    cv_.notify_all();
}

void EventHub::publish_drone(const mule::DroneState& s, SimTime at) {
    {
        std::lock_guard lock(mutex_);
        std::optional<std::uint64_t> after;
        if (!records_.empty()) after = records_.back().first;
        const std::string line = drone_event(s, at, after);
        for (auto& sub : subs_) push(*sub, line);
    }
    cv_.notify_all();
}

std::vector<std::string> EventHub::history(std::optional<std::uint64_t> after) const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [offset, line] : records_)
        if (!after || offset > *after) out.push_back(line);
    return out;
}

std::shared_ptr<EventHub::Subscription> EventHub::subscribe(std::optional<std::uint64_t> after) {
    auto sub = std::make_shared<Subscription>();
    std::lock_guard lock(mutex_);
    for (const auto& [offset, line] : records_)
        if (!after || offset > *after) sub->queue.push_back(line);
    sub->limit = sub->queue.size() + backlog_;
    if (shutdown_) {
        sub->queue.push_back(close_event(*shutdown_));
        sub->closed = true;
    }
    subs_.push_back(sub);
    return sub;
}

void EventHub::unsubscribe(const std::shared_ptr<Subscription>& sub) {
    std::lock_guard lock(mutex_);
    subs_.erase(std::remove(subs_.begin(), subs_.end(), sub), subs_.end());
}

std::vector<std::string> EventHub::next(const std::shared_ptr<Subscription>& sub, std::chrono::milliseconds wait,
                                        bool& closed) {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, wait, [&] { return !sub->queue.empty(); });
    std::vector<std::string> out(std::make_move_iterator(sub->queue.begin()), std::make_move_iterator(sub->queue.end()));
    sub->queue.clear();
    closed = sub->closed;
    return out;
}

void EventHub::close_all(const std::string& reason) {
    {
        std::lock_guard lock(mutex_);
        shutdown_ = reason;
        for (auto& s : subs_) {
            if (s->closed) continue;
            s->queue.push_back(close_event(reason));
            s->closed = true;
        }
    }
    cv_.notify_all();
}

std::size_t EventHub::subscribers() const {
    std::lock_guard lock(mutex_);
    return subs_.size();
}

} // namespace agrimule::service
