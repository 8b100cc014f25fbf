#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "agrimule/core/types.hpp"
#include "agrimule/mule/drone.hpp"
#include "json.hpp"

namespace agrimule::store {

enum class RecordKind { Reading, Decision, PumpEvent, TourReport, Override };

const char* to_string(RecordKind k) noexcept;
/// Throws Error("bad-kind").
RecordKind record_kind_from_string(const std::string& s);

struct ReadingBody {
    SensorReading reading;
    SimTime ingest_ts;
    friend bool operator==(const ReadingBody&, const ReadingBody&) = default;
};

struct DecisionBody {
    IrrigationDecision decision;
    friend bool operator==(const DecisionBody&, const DecisionBody&) = default;
};

struct PumpEventBody {
    RegionId region_id = 0;
    bool on = false;
    double flow_lpm = 0.0;
    double total_delivered_l = 0.0;
    double commanded_remaining_l = 0.0;
    std::string cause; ///< "command", "self-stop", "end-of-run"
    friend bool operator==(const PumpEventBody&, const PumpEventBody&) = default;
};

struct TourBody {
    mule::TourReport report;
    friend bool operator==(const TourBody&, const TourBody&) = default;
};

struct OverrideBody {
    RegionId region_id = 0;
    PumpCommand command;
    std::string operator_id;
    SimTime hold_until;
    friend bool operator==(const OverrideBody&, const OverrideBody&) = default;
};

using RecordBody = std::variant<ReadingBody, DecisionBody, PumpEventBody, TourBody, OverrideBody>;

struct Record {
    std::uint64_t offset = 0;
    SimTime at;
    RecordBody body;

    friend bool operator==(const Record&, const Record&) = default;

    RecordKind kind() const noexcept { return static_cast<RecordKind>(body.index()); }
    /// Region the record is about; tour reports have none.
    std::optional<RegionId> region() const noexcept;
};

nlohmann::json to_json(const Record& r);
/// Throws Error("bad-record") on schema mismatch.
Record record_from_json(const nlohmann::json& j);

} // namespace agrimule::store
