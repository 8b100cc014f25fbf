#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agrimule/mule/arq.hpp"
#include "agrimule/mule/link.hpp"
#include "agrimule/mule/node.hpp"
#include "agrimule/mule/payloads.hpp"
#include "agrimule/sim/kernel.hpp"

namespace agrimule::mule {

struct Session {
    RegionId region_id = 0;
    std::uint16_t start_seq = 0;
    std::uint8_t readings = 0;
    SimTime established_at;
};

struct AssocOutcome {
    std::optional<Session> session;
    int attempts = 0;
    SimTime finished;
    std::string error; ///< "assoc-failed" when every attempt went unanswered
};

/// ASSOC_REQ / ASSOC_ACK handshake over the node link.
void associate(sim::Kernel& kernel, Link& link, std::shared_ptr<SensorNode> node, std::uint16_t request_seq,
               ArqParams params, std::function<void(const AssocOutcome&)> done);

struct CollectOutcome {
    std::vector<SensorReading> readings; ///< seq order, duplicate-free
    bool complete = false;
    std::string error; ///< "collect-timeout" when incomplete
    std::uint32_t duplicates = 0;
    SimTime finished;
};

/// Stop-and-wait DATA / DATA_ACK transfer of the session's readings. The drone
/// side finishes as soon as it holds every reading, or after an idle window
/// with no new reading.
void collect_region(sim::Kernel& kernel, Link& link, std::shared_ptr<SensorNode> node, const Session& session,
                    ArqParams params, std::function<void(const CollectOutcome&)> done);

/// Cloud side of an UPLOAD: returns the DATA_ACK receipt, or nothing to stay silent.
using CloudReceiver = std::function<std::optional<Frame>(const Frame&)>;

struct RelayOutcome {
    bool delivered = false;
    std::optional<UploadReceipt> receipt;
    int attempts = 0;
    SimTime sent;
    SimTime finished;
    std::size_t count = 0;
};

/// UPLOAD of a batch over the uplink with retransmission.
void relay_to_cloud(sim::Kernel& kernel, Link& uplink, std::vector<SensorReading> batch, std::uint16_t upload_seq,
                    ArqParams params, CloudReceiver cloud, std::function<void(const RelayOutcome&)> done);

} // namespace agrimule::mule
