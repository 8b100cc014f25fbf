#pragma once

#include <functional>
#include <optional>
#include <string>

#include "agrimule/core/time.hpp"
#include "agrimule/mule/frame.hpp"
#include "agrimule/mule/link.hpp"
#include "agrimule/sim/kernel.hpp"

namespace agrimule::mule {

struct ArqParams {
    int max_attempts = 5;
    Millis timeout{200};
};

struct ArqResult {
    bool acked = false;
    int attempts = 0;
    SimTime finished;
    std::optional<Frame> reply;
};

/// Receiver side of an exchange: returns the acknowledgement to send back, if any.
using Responder = std::function<std::optional<Frame>(const Frame&)>;
using ArqDone = std::function<void(const ArqResult&)>;

/// Stop-and-wait transfer of one frame. Each attempt goes through `link`;
/// the receiver sees every copy that survives (duplicates included) and the
/// sender succeeds only if a reply with the same seq returns within `timeout`.
/// After `max_attempts` unanswered attempts `done` reports acked = false.
void send_reliable(sim::Kernel& kernel, Link& link, Frame frame, ArqParams params, Responder responder,
                   ArqDone done, std::string tag);

/// Fire-and-forget: one copy, no retransmission.
void send_once(sim::Kernel& kernel, Link& link, const Frame& frame, std::function<void(const Frame&)> receiver,
               std::string tag);

} // namespace agrimule::mule
