#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agrimule/store/record.hpp"

namespace agrimule::store {

inline constexpr const char* kLogMagic = "#agrimule-telemetry";
inline constexpr int kLogVersion = 1;

/// Scenario identity written in the log's first line.
struct StoreHeader {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t duration_ms = 0;
    friend bool operator==(const StoreHeader&, const StoreHeader&) = default;
};

struct Latest {
    std::optional<Record> reading;  ///< nullopt: none yet
    std::optional<Record> decision; ///< nullopt: none yet
};

/// Append-only record log. Each line on disk is `<crc16 hex> <json>`; a torn
/// or corrupt line is skipped with a warning when the log is reopened.
class TelemetryStore {
public:
    /// Store without a backing file.
    explicit TelemetryStore(StoreHeader header = {});

    /// Creates (truncating) a log file. Throws Error("io-error").
    static TelemetryStore create(const std::filesystem::path& path, StoreHeader header);
    /// Reopens an existing log; appends continue after the last good record.
    /// A zero-byte file opens as an empty store with a default header.
    static TelemetryStore open(const std::filesystem::path& path);

    TelemetryStore(TelemetryStore&&) noexcept;
    TelemetryStore& operator=(TelemetryStore&&) noexcept;
    ~TelemetryStore();

    /// Durable (flushed) before returning. Throws Error("io-error").
    std::uint64_t append(SimTime at, RecordBody body);

    /// Records in offset order with at in [from, to]. Throws Error("bad-range") if from > to.
    std::vector<Record> query(std::optional<RegionId> region, std::optional<RecordKind> kind, SimTime from,
                              SimTime to) const;
    Latest latest(RegionId region) const;

    const std::vector<Record>& records() const noexcept { return records_; }
    const StoreHeader& header() const noexcept { return header_; }
    std::optional<std::uint64_t> last_offset() const noexcept;
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    using Listener = std::function<void(const Record&)>;
    std::uint64_t subscribe(Listener listener);
    void unsubscribe(std::uint64_t id);

    /// Serialized line for a record (without newline).
    static std::string encode_line(const Record& r);
    /// Returns nullopt if the CRC or JSON does not verify.
    static std::optional<Record> decode_line(const std::string& line);

private:
    StoreHeader header_;
    std::vector<Record> records_;
    std::uint64_t next_offset_ = 0;
    std::unique_ptr<std::ofstream> file_;
    std::filesystem::path path_;
    std::vector<std::string> warnings_;
    std::map<std::uint64_t, Listener> listeners_;
    std::uint64_t next_listener_ = 1;
};

} // namespace agrimule::store
