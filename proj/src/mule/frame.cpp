#include "agrimule/mule/frame.hpp"

#include <string>

#include "agrimule/error.hpp"
#include "agrimule/mule/crc16.hpp"

namespace agrimule::mule {

const char* to_string(FrameType t) noexcept {
    switch (t) {
    case FrameType::Beacon: return "BEACON";
    case FrameType::AssocReq: return "ASSOC_REQ";
    case FrameType::AssocAck: return "ASSOC_ACK";
    case FrameType::Data: return "DATA";
    case FrameType::DataAck: return "DATA_ACK";
    case FrameType::Upload: return "UPLOAD";
    case FrameType::Decision: return "DECISION";
    case FrameType::PumpCmd: return "PUMP_CMD";
    case FrameType::PumpAck: return "PUMP_ACK";
    }
    return "?";
}

std::optional<FrameType> frame_type_from_byte(std::uint8_t b) noexcept {
    if (b >= 0x01 && b <= 0x09) return static_cast<FrameType>(b);
    return std::nullopt;
}

Bytes encode_frame(const Frame& frame) {
    if (frame.payload.size() > kMaxPayload)
        throw Error("frame-too-big", std::to_string(frame.payload.size()) + " byte payload");
    if (!frame_type_from_byte(static_cast<std::uint8_t>(frame.type))) throw Error("unknown-type");

    const auto len = static_cast<std::uint16_t>(frame.payload.size());
    Bytes out;
    out.reserve(kHeaderSize + frame.payload.size() + kTrailerSize);
    out.push_back(kMagic0);
    out.push_back(kMagic1);
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(frame.type));
    out.push_back(static_cast<std::uint8_t>(frame.seq >> 8));
    out.push_back(static_cast<std::uint8_t>(frame.seq & 0xFF));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len & 0xFF));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    const std::uint16_t crc = crc16_ccitt_false(out);
    out.push_back(static_cast<std::uint8_t>(crc >> 8));
    out.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw Error("short", "need at least the magic");
    if (bytes[0] != kMagic0 || bytes[1] != kMagic1) throw Error("not-a-frame");
    if (bytes.size() < kHeaderSize + kTrailerSize) throw Error("short", "truncated header");

    const std::size_t len = (std::size_t{bytes[6]} << 8) | bytes[7];
    const std::size_t total = kHeaderSize + len + kTrailerSize;
    if (bytes.size() < total) throw Error("short", "truncated payload");
    if (bytes.size() > total) throw Error("bad-length", "trailing bytes after frame");

    const auto body = bytes.first(kHeaderSize + len);
    const std::uint16_t expected = static_cast<std::uint16_t>((bytes[total - 2] << 8) | bytes[total - 1]);
    if (crc16_ccitt_false(body) != expected) throw Error("corrupt", "crc mismatch");

    if (bytes[2] != kVersion) throw Error("bad-version", std::to_string(bytes[2]));
    const auto type = frame_type_from_byte(bytes[3]);
    if (!type) throw Error("unknown-type", std::to_string(bytes[3]));

    Frame f;
    f.type = *type;
    f.seq = static_cast<std::uint16_t>((bytes[4] << 8) | bytes[5]);
    f.payload.assign(bytes.begin() + kHeaderSize, bytes.begin() + static_cast<std::ptrdiff_t>(kHeaderSize + len));
    return f;
}

} // namespace agrimule::mule
