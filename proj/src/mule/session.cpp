#include "agrimule/mule/session.hpp"

#include <map>

#include "agrimule/error.hpp"

namespace agrimule::mule {

void associate(sim::Kernel& kernel, Link& link, std::shared_ptr<SensorNode> node, std::uint16_t request_seq,
               ArqParams params, std::function<void(const AssocOutcome&)> done) {
    Frame request{FrameType::AssocReq, request_seq, encode_assoc_request({node->region()})};
    Responder responder = [node](const Frame& in) { return node->on_assoc_request(in); };
    send_reliable(
        kernel, link, std::move(request), params, std::move(responder),
        [done = std::move(done), region = node->region()](const ArqResult& res) {
            AssocOutcome out;
            out.attempts = res.attempts;
            out.finished = res.finished;
            if (res.acked && res.reply && res.reply->type == FrameType::AssocAck) {
                const AssocAccept accept = decode_assoc_accept(res.reply->payload);
                if (accept.region_id == region)
                    out.session = Session{accept.region_id, accept.start_seq, accept.readings, res.finished};
            }
            if (!out.session) out.error = "assoc-failed";
            done(out);
        },
        "assoc");
}

namespace {

class Collector : public std::enable_shared_from_this<Collector> {
public:
    Collector(sim::Kernel& k, Link& l, std::shared_ptr<SensorNode> n, Session s, ArqParams p,
              std::function<void(const CollectOutcome&)> d)
        : kernel_(k), link_(l), node_(std::move(n)), session_(s), params_(p), done_(std::move(d)),
          idle_window_(node_->config().sample_interval + (params_.max_attempts + 1) * params_.timeout) {}

    void start() {
        node_->begin_transfer();
        arm_idle();
        if (session_.readings == 0) {
            close(true);
            return;
        }
        schedule_next_sample();
    }

private:
    void schedule_next_sample() {
        if (closed_ || sent_ == session_.readings) return;
        auto self = shared_from_this();
        kernel_.schedule(node_->next_sample_time(kernel_.now()), "node.sample", [self] { self->send_next(); });
    }

    void send_next() {
        if (closed_) return;
        const SensorReading reading = node_->sample(kernel_.now());
        node_->note_transmitted();
        ++sent_;
        auto self = shared_from_this();
        send_reliable(
            kernel_, link_, Frame{FrameType::Data, reading.seq_no, encode_reading(reading)}, params_,
            [self](const Frame& in) { return self->on_data(in); },
            [self](const ArqResult& res) {
                // An unacknowledged reading ends the node's side of the transfer.
                if (res.acked) self->schedule_next_sample();
            },
            "collect");
    }

    std::optional<Frame> on_data(const Frame& in) {
        if (closed_ || in.type != FrameType::Data) return std::nullopt;
        const auto offset = static_cast<std::uint16_t>(in.seq - session_.start_seq);
        if (offset >= session_.readings) return std::nullopt;
        const SensorReading reading = decode_reading(in.payload, in.seq);
        if (received_.emplace(offset, reading).second)
            arm_idle();
        else
            ++duplicates_;
        Frame ack{FrameType::DataAck, in.seq, {}};
        if (received_.size() == session_.readings) close(true);
        return ack;
    }

    void arm_idle() {
        if (idle_timer_) kernel_.cancel(*idle_timer_);
        auto self = shared_from_this();
        idle_timer_ = kernel_.schedule_in(idle_window_, "collect.idle", [self] {
            self->idle_timer_.reset();
            self->close(false);
        });
    }

    void close(bool complete) {
        if (closed_) return;
        closed_ = true;
        if (idle_timer_) kernel_.cancel(*idle_timer_);
        idle_timer_.reset();
        CollectOutcome out;
        out.complete = complete;
        out.duplicates = duplicates_;
        out.finished = kernel_.now();
        if (!complete) out.error = "collect-timeout";
        for (const auto& [offset, reading] : received_) out.readings.push_back(reading);
        done_(out);
    }

    sim::Kernel& kernel_;
    Link& link_;
    std::shared_ptr<SensorNode> node_;
    Session session_;
    ArqParams params_;
    std::function<void(const CollectOutcome&)> done_;
    Millis idle_window_;

    std::map<std::uint16_t, SensorReading> received_; // keyed by offset from start_seq
    std::uint32_t duplicates_ = 0;
    std::uint8_t sent_ = 0;
    bool closed_ = false;
    std::optional<sim::EventId> idle_timer_;
};

} // namespace

void collect_region(sim::Kernel& kernel, Link& link, std::shared_ptr<SensorNode> node, const Session& session,
                    ArqParams params, std::function<void(const CollectOutcome&)> done) {
    if (node->region() != session.region_id) throw Error("bad-session", "node does not own the session region");
    auto collector = std::make_shared<Collector>(kernel, link, std::move(node), session, params, std::move(done));
    collector->start();
}

void relay_to_cloud(sim::Kernel& kernel, Link& uplink, std::vector<SensorReading> batch, std::uint16_t upload_seq,
                    ArqParams params, CloudReceiver cloud, std::function<void(const RelayOutcome&)> done) {
    const SimTime sent = kernel.now();
    const std::size_t count = batch.size();
    Frame upload{FrameType::Upload, upload_seq, encode_upload(batch)};
    send_reliable(
        kernel, uplink, std::move(upload), params, std::move(cloud),
        [done = std::move(done), sent, count](const ArqResult& res) {
            RelayOutcome out;
            out.attempts = res.attempts;
            out.sent = sent;
            out.finished = res.finished;
            out.count = count;
            if (res.acked && res.reply && res.reply->type == FrameType::DataAck) {
                out.receipt = decode_receipt(res.reply->payload);
                out.delivered = true;
            }
            done(out);
        },
        "relay");
}

} // namespace agrimule::mule
