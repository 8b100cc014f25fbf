#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agrimule/core/types.hpp"
#include "agrimule/mule/frame.hpp"

namespace agrimule::mule {

// Fixed-point payload layouts carried inside frames. All integers big-endian.

inline constexpr std::size_t kReadingPayloadSize = 11;

/// region u8 | ts u32 | temp i16 centi-°C | hum u16 centi-% | moist u16 centi-%.
/// The reading's seq_no travels in the frame header.
Bytes encode_reading(const SensorReading& reading);
/// Throws Error("bad-payload") unless exactly 11 bytes.
SensorReading decode_reading(std::span<const std::uint8_t> payload, std::uint16_t seq_no);

struct AssocRequest {
    RegionId region_id = 0;
    friend bool operator==(const AssocRequest&, const AssocRequest&) = default;
};
struct AssocAccept {
    RegionId region_id = 0;
    std::uint16_t start_seq = 0;
    std::uint8_t readings = 0;
    friend bool operator==(const AssocAccept&, const AssocAccept&) = default;
};

Bytes encode_assoc_request(const AssocRequest& r);
AssocRequest decode_assoc_request(std::span<const std::uint8_t> payload);
Bytes encode_assoc_accept(const AssocAccept& a);
AssocAccept decode_assoc_accept(std::span<const std::uint8_t> payload);

/// u16 count | count x (seq u16 | 11-byte reading).
Bytes encode_upload(std::span<const SensorReading> readings);
/// Throws Error("bad-upload") on any structural problem.
std::vector<SensorReading> decode_upload(std::span<const std::uint8_t> payload);

/// Cloud receipt for an UPLOAD, carried in a DATA_ACK: ingest ms u32 | accepted u16 | duplicates u16.
struct UploadReceipt {
    SimTime ingest_ts;
    std::uint16_t accepted = 0;
    std::uint16_t duplicates = 0;
    friend bool operator==(const UploadReceipt&, const UploadReceipt&) = default;
};
Bytes encode_receipt(const UploadReceipt& r);
UploadReceipt decode_receipt(std::span<const std::uint8_t> payload);

/// region u8 | command u8 (0 none, 1 on, 2 off) | quantity centi-L u32 | source seq u16 | computed_at ms u32.
Bytes encode_decision(const IrrigationDecision& d);
IrrigationDecision decode_decision(std::span<const std::uint8_t> payload);

/// region u8 | command u8 (0 off, 1 on) | quantity centi-L u32.
struct PumpOrder {
    RegionId region_id = 0;
    PumpCommand command;
    friend bool operator==(const PumpOrder&, const PumpOrder&) = default;
};
Bytes encode_pump_cmd(const PumpOrder& order);
PumpOrder decode_pump_cmd(std::span<const std::uint8_t> payload);

/// region u8 | on u8 | total delivered centi-L u32.
struct PumpStatus {
    RegionId region_id = 0;
    bool on = false;
    double total_delivered_l = 0.0;
    friend bool operator==(const PumpStatus&, const PumpStatus&) = default;
};
Bytes encode_pump_status(const PumpStatus& status);
PumpStatus decode_pump_status(std::span<const std::uint8_t> payload);

} // namespace agrimule::mule
