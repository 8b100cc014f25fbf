#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace agrimule::mule {

using Bytes = std::vector<std::uint8_t>;

enum class FrameType : std::uint8_t {
    Beacon = 0x01,
    AssocReq = 0x02,
    AssocAck = 0x03,
    Data = 0x04,
    DataAck = 0x05,
    Upload = 0x06,
    Decision = 0x07,
    PumpCmd = 0x08,
    PumpAck = 0x09,
};

inline constexpr std::uint8_t kMagic0 = 0x41; // 'A'
inline constexpr std::uint8_t kMagic1 = 0x47; // 'G'
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 8;
inline constexpr std::size_t kTrailerSize = 2;
inline constexpr std::size_t kMaxPayload = 0xFFFF;

const char* to_string(FrameType t) noexcept;
std::optional<FrameType> frame_type_from_byte(std::uint8_t b) noexcept;

struct Frame {
    FrameType type = FrameType::Beacon;
    std::uint16_t seq = 0;
    Bytes payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// magic(2) | version | type | seq u16 BE | len u16 BE | payload | crc u16 BE.
/// Throws Error("frame-too-big") for payloads over 65535 bytes.
Bytes encode_frame(const Frame& frame);

/// Throws Error with code "short", "not-a-frame", "corrupt", "bad-length",
/// "bad-version" or "unknown-type".
Frame decode_frame(std::span<const std::uint8_t> bytes);

} // namespace agrimule::mule
