#include "agrimule/mule/arq.hpp"

#include <memory>

namespace agrimule::mule {

namespace {

struct Exchange : std::enable_shared_from_this<Exchange> {
    sim::Kernel& kernel;
    Link& link;
    Frame frame;
    Bytes wire;
    ArqParams params;
    Responder responder;
    ArqDone done;
    std::string tag;
    int attempts = 0;

    Exchange(sim::Kernel& k, Link& l, Frame f, ArqParams p, Responder r, ArqDone d, std::string t)
        : kernel(k), link(l), frame(std::move(f)), wire(encode_frame(frame)), params(p), responder(std::move(r)),
          done(std::move(d)), tag(std::move(t)) {}

    void attempt() {
        ++attempts;
        const SimTime sent = kernel.now();
        const auto forward = link.transit(sent, frame.type);
        auto self = shared_from_this();
        if (!forward) {
            arm_timeout(sent);
            return;
        }
        const bool late = *forward > params.timeout;
        kernel.schedule(sent + *forward, tag + ".deliver", [self, sent, forward = *forward, late] {
            self->deliver(sent, forward, late);
        });
        if (late) arm_timeout(sent);
    }

    void deliver(SimTime sent, Millis forward, bool late) {
        const Frame received = decode_frame(wire);
        std::optional<Frame> reply = responder(received);
        if (!reply) {
            if (!late) arm_timeout(sent);
            return;
        }
        const auto back = link.transit(kernel.now(), reply->type);
        if (late) return;
        if (back && forward + *back <= params.timeout && reply->seq == frame.seq) {
            auto self = shared_from_this();
            // The reply crosses the link as bytes too.
            auto reply_wire = std::make_shared<Bytes>(encode_frame(*reply));
            kernel.schedule(kernel.now() + *back, tag + ".ack", [self, reply_wire] {
                self->finish(true, decode_frame(*reply_wire));
            });
            return;
        }
        arm_timeout(sent);
    }

    void arm_timeout(SimTime sent) {
        auto self = shared_from_this();
        kernel.schedule(sent + params.timeout, tag + ".timeout", [self] {
            if (self->attempts < self->params.max_attempts)
                self->attempt();
            else
                self->finish(false, std::nullopt);
        });
    }

    void finish(bool acked, std::optional<Frame> reply) {
        ArqResult result{acked, attempts, kernel.now(), std::move(reply)};
        if (done) done(result);
    }
};

} // namespace

void send_reliable(sim::Kernel& kernel, Link& link, Frame frame, ArqParams params, Responder responder,
                   ArqDone done, std::string tag) {
    if (params.max_attempts < 1) params.max_attempts = 1;
    auto ex = std::make_shared<Exchange>(kernel, link, std::move(frame), params, std::move(responder), std::move(done),
                                         std::move(tag));
    ex->attempt();
}

void send_once(sim::Kernel& kernel, Link& link, const Frame& frame, std::function<void(const Frame&)> receiver,
               std::string tag) {
    const auto delay = link.transit(kernel.now(), frame.type);
    if (!delay) return;
    auto wire = std::make_shared<Bytes>(encode_frame(frame));
    kernel.schedule(kernel.now() + *delay, std::move(tag), [wire, receiver = std::move(receiver)] {
        if (receiver) receiver(decode_frame(*wire));
    });
}

} // namespace agrimule::mule
