#include "agrimule/sim/kernel.hpp"

#include "agrimule/error.hpp"

namespace agrimule::sim {

Kernel::Kernel(std::uint64_t seed) : seed_(seed) {}

EventId Kernel::schedule(SimTime due, std::string target, Action action) {
    if (due < now_) {
        throw Error("past-event", target + " due " + std::to_string(due.millis) + " ms < now " +
                                      std::to_string(now_.millis) + " ms");
    }
    const EventId id = next_id_++;
    const Key key{due, next_order_++};
    queue_.emplace(key, Pending{id, std::move(target), std::move(action)});
    index_.emplace(id, key);
    return id;
}

EventId Kernel::schedule_in(Millis delay, std::string target, Action action) {
    return schedule(now_ + delay, std::move(target), std::move(action));
}

bool Kernel::cancel(EventId id) {
    auto it = index_.find(id);
    if (it == index_.end()) return false;
    queue_.erase(it->second);
    index_.erase(it);
    return true;
}

bool Kernel::step(SimTime limit) {
    drain_commands();
    if (queue_.empty()) return false;
    auto it = queue_.begin();
    if (it->first.due > limit) return false;

    now_ = it->first.due;
    Pending ev = std::move(it->second);
    queue_.erase(it);
    index_.erase(ev.id);

    if (tracing_) trace_.push_back({ev.id, now_, ev.target});
    ++executed_;
    ev.action();
    return true;
}

RunReport Kernel::run_until(SimTime t_end) {
    const std::uint64_t before = executed_;
    while (step(t_end)) {
    }
    if (t_end > now_) now_ = t_end;
    return {executed_ - before, now_};
}

RunReport Kernel::run_while(const std::function<bool()>& keep_going, SimTime horizon) {
    const std::uint64_t before = executed_;
    while (keep_going() && step(horizon)) {
    }
    return {executed_ - before, now_};
}

void Kernel::post_command(Action command) {
    std::lock_guard lock(command_mutex_);
    commands_.push_back(std::move(command));
}

std::size_t Kernel::drain_commands() {
    std::size_t ran = 0;
    for (;;) {
        Action next;
        {
            std::lock_guard lock(command_mutex_);
            if (commands_.empty()) break;
            next = std::move(commands_.front());
            commands_.pop_front();
        }
        next();
        ++ran;
    }
    return ran;
}

} // namespace agrimule::sim
