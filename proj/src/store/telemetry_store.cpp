#include "agrimule/store/telemetry_store.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "agrimule/error.hpp"
#include "agrimule/mule/crc16.hpp"

namespace agrimule::store {

using nlohmann::json;

namespace {

std::uint16_t line_crc(const std::string& body) {
    return mule::crc16_ccitt_false(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
}

std::string header_line(const StoreHeader& h) {
    const json meta = {{"scenario", h.scenario}, {"seed", h.seed}, {"duration_ms", h.duration_ms}};
    return std::string(kLogMagic) + " v" + std::to_string(kLogVersion) + " " + meta.dump();
}

StoreHeader parse_header(const std::string& line) {
    const std::string prefix = std::string(kLogMagic) + " v" + std::to_string(kLogVersion) + " ";
    if (line.rfind(prefix, 0) != 0) throw Error("bad-log", "missing or unsupported header");
    try {
        const json meta = json::parse(line.substr(prefix.size()));
        return {meta.at("scenario").get<std::string>(), meta.at("seed").get<std::uint64_t>(),
                meta.at("duration_ms").get<std::uint64_t>()};
    } catch (const json::exception& e) {
        throw Error("bad-log", e.what());
    }
}

} // namespace

TelemetryStore::TelemetryStore(StoreHeader header) : header_(std::move(header)) {}

TelemetryStore::TelemetryStore(TelemetryStore&&) noexcept = default;
TelemetryStore& TelemetryStore::operator=(TelemetryStore&&) noexcept = default;
TelemetryStore::~TelemetryStore() = default;

TelemetryStore TelemetryStore::create(const std::filesystem::path& path, StoreHeader header) {
    TelemetryStore s(std::move(header));
    s.path_ = path;
    s.file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*s.file_) throw Error("io-error", "cannot create " + path.string());
    *s.file_ << header_line(s.header_) << '\n';
    s.file_->flush();
    if (!*s.file_) throw Error("io-error", "cannot write " + path.string());
    return s;
}

TelemetryStore TelemetryStore::open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io-error", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    in.close();

    if (text.empty()) {
        // A log that never got its header: treat as an empty store.
        TelemetryStore fresh = create(path, {});
        fresh.warnings_.push_back("empty log");
        return fresh;
    }

    TelemetryStore s;
    s.path_ = path;
    std::size_t pos = 0;
    std::size_t good_end = 0;
    bool have_header = false;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const bool torn = nl == std::string::npos;
        const std::string line = text.substr(pos, torn ? std::string::npos : nl - pos);
        const std::size_t next = torn ? text.size() : nl + 1;
        if (!have_header) {
            if (torn) throw Error("bad-log", "torn header");
            s.header_ = parse_header(line);
            have_header = true;
            good_end = next;
        } else if (torn) {
            s.warnings_.push_back("dropped torn final line at byte " + std::to_string(pos));
        } else if (auto rec = decode_line(line)) {
            if (!s.records_.empty() && rec->offset <= s.records_.back().offset) {
                s.warnings_.push_back("skipped out-of-order record at byte " + std::to_string(pos));
            } else {
                s.records_.push_back(std::move(*rec));
                good_end = next;
            }
        } else if (next == text.size()) {
            s.warnings_.push_back("dropped corrupt final line at byte " + std::to_string(pos));
        } else {
            s.warnings_.push_back("skipped corrupt line at byte " + std::to_string(pos));
            good_end = next;
        }
        pos = next;
    }
    if (!s.records_.empty()) s.next_offset_ = s.records_.back().offset + 1;

    std::error_code ec;
    if (good_end < text.size()) std::filesystem::resize_file(path, good_end, ec);
    if (ec) throw Error("io-error", "cannot truncate torn tail: " + ec.message());
    s.file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::app);
    if (!*s.file_) throw Error("io-error", "cannot append to " + path.string());
    return s;
}

std::string TelemetryStore::encode_line(const Record& r) {
    const std::string body = to_json(r).dump();
    char crc[5];
    std::snprintf(crc, sizeof crc, "%04x", line_crc(body));
    return std::string(crc) + " " + body;
}

std::optional<Record> TelemetryStore::decode_line(const std::string& line) {
    if (line.size() < 6 || line[4] != ' ') return std::nullopt;
    unsigned expected = 0;
    if (std::sscanf(line.c_str(), "%4x", &expected) != 1) return std::nullopt;
    const std::string body = line.substr(5);
    if (line_crc(body) != expected) return std::nullopt;
    try {
        return record_from_json(json::parse(body));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::uint64_t TelemetryStore::append(SimTime at, RecordBody body) {
    Record r{next_offset_, at, std::move(body)};
    if (file_) {
        *file_ << encode_line(r) << '\n';
        file_->flush();
        if (!*file_) throw Error("io-error", "append failed on " + path_.string());
    }
    ++next_offset_;
    records_.push_back(std::move(r));
    const Record& stored = records_.back();
    for (const auto& [id, listener] : listeners_) listener(stored);
    return stored.offset;
}

std::vector<Record> TelemetryStore::query(std::optional<RegionId> region, std::optional<RecordKind> kind,
                                          SimTime from, SimTime to) const {
    if (from > to) throw Error("bad-range", "start after end");
    std::vector<Record> out;
    for (const auto& r : records_) {
        if (r.at < from || r.at > to) continue;
        if (kind && r.kind() != *kind) continue;
        if (region && r.region() != region) continue;
        out.push_back(r);
    }
    return out;
}

Latest TelemetryStore::latest(RegionId region) const {
    Latest l;
    for (auto it = records_.rbegin(); it != records_.rend() && (!l.reading || !l.decision); ++it) {
        if (it->region() != region) continue;
        if (!l.reading && it->kind() == RecordKind::Reading) l.reading = *it;
        if (!l.decision && it->kind() == RecordKind::Decision) l.decision = *it;
    }
    return l;
}

std::optional<std::uint64_t> TelemetryStore::last_offset() const noexcept {
    if (records_.empty()) return std::nullopt;
    return records_.back().offset;
}

std::uint64_t TelemetryStore::subscribe(Listener listener) {
    const auto id = next_listener_++;
    listeners_.emplace(id, std::move(listener));
    return id;
}

void TelemetryStore::unsubscribe(std::uint64_t id) { listeners_.erase(id); }

} // namespace agrimule::store
