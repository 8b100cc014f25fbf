#include "agrimule/mule/payloads.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "agrimule/error.hpp"

namespace agrimule::mule {

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
    void u32(std::uint32_t v) {
        u16(static_cast<std::uint16_t>(v >> 16));
        u16(static_cast<std::uint16_t>(v & 0xFFFF));
    }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> in, const char* error_code) : in_(in), code_(error_code) {}

    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        const auto v = static_cast<std::uint16_t>((in_[pos_] << 8) | in_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        const std::uint32_t hi = u16();
        return (hi << 16) | u16();
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    void finish() const {
        if (pos_ != in_.size()) throw Error(code_, "trailing payload bytes");
    }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw Error(code_, "payload too short");
    }
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    const char* code_;
};

std::uint16_t centi_unsigned(double v, const char* field) {
    const long c = std::lround(v * 100.0);
    if (c < 0 || c > 10000) throw Error("bad-reading", std::string(field) + " outside [0, 100]");
    return static_cast<std::uint16_t>(c);
}

std::uint32_t centi_liters(double liters) {
    const double c = std::round(liters * 100.0);
    if (!(c >= 0.0) || c > static_cast<double>(std::numeric_limits<std::uint32_t>::max()))
        throw Error("bad-quantity", "quantity not representable");
    return static_cast<std::uint32_t>(c);
}

void write_reading(Writer& w, const SensorReading& r) {
    const long t = std::lround(r.temperature * 100.0);
    if (t < std::numeric_limits<std::int16_t>::min() || t > std::numeric_limits<std::int16_t>::max())
        throw Error("bad-reading", "temperature out of range");
    w.u8(r.region_id);
    w.u32(r.reading_ts);
    w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(t)));
    w.u16(centi_unsigned(r.humidity, "humidity"));
    w.u16(centi_unsigned(r.soil_moisture, "soil_moisture"));
}

SensorReading read_reading(Reader& in, std::uint16_t seq_no, const char* code) {
    SensorReading r;
    r.region_id = in.u8();
    r.reading_ts = in.u32();
    r.temperature = static_cast<std::int16_t>(in.u16()) / 100.0;
    const std::uint16_t hum = in.u16();
    const std::uint16_t moist = in.u16();
    if (hum > 10000 || moist > 10000) throw Error(code, "percentage outside [0, 100]");
    r.humidity = hum / 100.0;
    r.soil_moisture = moist / 100.0;
    r.seq_no = seq_no;
    return r;
}

} // namespace

Bytes encode_reading(const SensorReading& reading) {
    Writer w;
    write_reading(w, reading);
    return w.take();
}

SensorReading decode_reading(std::span<const std::uint8_t> payload, std::uint16_t seq_no) {
    if (payload.size() != kReadingPayloadSize)
        throw Error("bad-payload", "DATA payload must be 11 bytes, got " + std::to_string(payload.size()));
    Reader in(payload, "bad-payload");
    return read_reading(in, seq_no, "bad-payload");
}

Bytes encode_assoc_request(const AssocRequest& r) { return Bytes{r.region_id}; }

AssocRequest decode_assoc_request(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    AssocRequest r{in.u8()};
    in.finish();
    return r;
}

Bytes encode_assoc_accept(const AssocAccept& a) {
    Writer w;
    w.u8(a.region_id);
    w.u16(a.start_seq);
    w.u8(a.readings);
    return w.take();
}

AssocAccept decode_assoc_accept(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    AssocAccept a;
    a.region_id = in.u8();
    a.start_seq = in.u16();
    a.readings = in.u8();
    in.finish();
    return a;
}

Bytes encode_upload(std::span<const SensorReading> readings) {
    if (readings.size() > 0xFFFF) throw Error("frame-too-big", "too many readings for one UPLOAD");
    Writer w;
    w.u16(static_cast<std::uint16_t>(readings.size()));
    for (const auto& r : readings) {
        w.u16(r.seq_no);
        write_reading(w, r);
    }
    return w.take();
}

std::vector<SensorReading> decode_upload(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-upload");
    const std::uint16_t count = in.u16();
    std::vector<SensorReading> out;
    out.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
        const std::uint16_t seq = in.u16();
        out.push_back(read_reading(in, seq, "bad-upload"));
    }
    in.finish();
    return out;
}

Bytes encode_receipt(const UploadReceipt& r) {
    Writer w;
    w.u32(static_cast<std::uint32_t>(r.ingest_ts.millis));
    w.u16(r.accepted);
    w.u16(r.duplicates);
    return w.take();
}

UploadReceipt decode_receipt(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    UploadReceipt r;
    r.ingest_ts = SimTime{in.u32()};
    r.accepted = in.u16();
    r.duplicates = in.u16();
    in.finish();
    return r;
}

Bytes encode_decision(const IrrigationDecision& d) {
    Writer w;
    w.u8(d.region_id);
    w.u8(static_cast<std::uint8_t>(d.command));
    w.u32(centi_liters(d.water_quantity_l));
    w.u16(d.source_reading.seq_no);
    w.u32(static_cast<std::uint32_t>(d.computed_at.millis));
    return w.take();
}

IrrigationDecision decode_decision(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    IrrigationDecision d;
    d.region_id = in.u8();
    const std::uint8_t cmd = in.u8();
    if (cmd > 2) throw Error("bad-payload", "unknown decision command");
    d.command = static_cast<DecisionCommand>(cmd);
    d.water_quantity_l = in.u32() / 100.0;
    d.source_reading = {d.region_id, in.u16()};
    d.computed_at = SimTime{in.u32()};
    in.finish();
    return d;
}

Bytes encode_pump_cmd(const PumpOrder& order) {
    Writer w;
    w.u8(order.region_id);
    w.u8(order.command.is_on() ? 1 : 0);
    w.u32(order.command.is_on() ? centi_liters(order.command.quantity_l) : 0);
    return w.take();
}

PumpOrder decode_pump_cmd(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    PumpOrder o;
    o.region_id = in.u8();
    const std::uint8_t cmd = in.u8();
    const std::uint32_t q = in.u32();
    in.finish();
    if (cmd > 1) throw Error("bad-payload", "unknown pump command");
    o.command = cmd == 1 ? PumpCommand::on(q / 100.0) : PumpCommand::off();
    return o;
}

Bytes encode_pump_status(const PumpStatus& status) {
    Writer w;
    w.u8(status.region_id);
    w.u8(status.on ? 1 : 0);
    w.u32(centi_liters(status.total_delivered_l));
    return w.take();
}

PumpStatus decode_pump_status(std::span<const std::uint8_t> payload) {
    Reader in(payload, "bad-payload");
    PumpStatus s;
    s.region_id = in.u8();
    s.on = in.u8() != 0;
    s.total_delivered_l = in.u32() / 100.0;
    in.finish();
    return s;
}

} // namespace agrimule::mule
