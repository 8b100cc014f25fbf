#include "agrimule/mule/node.hpp"

#include "agrimule/error.hpp"

namespace agrimule::mule {

SensorNode::SensorNode(RegionId region, Sampler sampler, NodeConfig config)
    : region_(region), sampler_(std::move(sampler)), config_(config) {
    if (config_.sample_interval.count() <= 0) throw Error("bad-config", "sample interval must be positive");
}

std::optional<Frame> SensorNode::on_assoc_request(const Frame& request) {
    if (request.type != FrameType::AssocReq) return std::nullopt;
    const AssocRequest req = decode_assoc_request(request.payload);
    if (req.region_id != region_) return std::nullopt;
    if (!pending_) pending_ = AssocAccept{region_, next_seq_, config_.readings_per_visit};
    return Frame{FrameType::AssocAck, request.seq, encode_assoc_accept(*pending_)};
}

std::uint16_t SensorNode::begin_transfer() {
    pending_.reset();
    return next_seq_;
}

SensorReading SensorNode::sample(SimTime t) {
    SensorReading r = sampler_(t);
    r.region_id = region_;
    r.reading_ts = static_cast<std::uint32_t>(t.millis / 1000);
    r.seq_no = next_seq_++;
    return r;
}

SimTime SensorNode::next_sample_time(SimTime t) const {
    const auto interval = static_cast<std::uint64_t>(config_.sample_interval.count());
    return SimTime{(t.millis + interval - 1) / interval * interval};
}

} // namespace agrimule::mule
