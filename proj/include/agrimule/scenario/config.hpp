#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "agrimule/cloud/engine.hpp"
#include "agrimule/cloud/moisture.hpp"
#include "agrimule/error.hpp"
#include "agrimule/farm/sensors.hpp"
#include "agrimule/farm/weather.hpp"
#include "agrimule/mule/arq.hpp"
#include "agrimule/mule/link.hpp"
#include "agrimule/mule/node.hpp"
#include "json.hpp"

namespace agrimule::scenario {

struct RegionConfig {
    Region region;
    double moisture_pct = 35.0;
    double target_pct = 45.0;
    double dry_rate_k0 = 0.0; ///< %/hour
    double temp_coeff = 0.02; ///< 1/°C
    double pump_flow_lpm = 5.0;
    int fc28_noise_lsb = 2;
    cloud::IrrigationPolicy policy;
};

struct LinkConfig {
    mule::LinkModel model;
    mule::ArqParams arq;
};

struct DroneConfig {
    Vec2 base;
    double speed_mps = 5.0;
    Millis position_interval{1000};
    bool auto_tours = true;
    Millis first_tour{0};
    Millis tour_interval{15 * 60 * 1000};
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8470;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 7;
    Millis duration{60 * 60 * 1000};
    Millis soil_step{1000};
    std::vector<RegionConfig> regions;
    std::vector<farm::WeatherPoint> weather;
    farm::Dht22Model dht22;
    mule::NodeConfig node;
    LinkConfig node_link{{Millis{100}, Millis{0}, 0.0, {}}, {5, Millis{200}}};
    LinkConfig uplink{{Millis{350}, Millis{0}, 0.0, {}}, {5, Millis{1000}}};
    LinkConfig pump_link{{Millis{100}, Millis{0}, 0.0, {}}, {5, Millis{500}}};
    cloud::EngineConfig cloud;
    DroneConfig drone;
    ServiceConfig service;
};

/// Validation failure listing every offending field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// Field-path messages for every violated constraint; empty when valid.
std::vector<std::string> validate(const ScenarioConfig& config);

/// Parses and validates. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& j);
/// Throws Error("io-error") if unreadable, ConfigError if invalid.
ScenarioConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ScenarioConfig& config);

/// Two regions under a hot, dry summer trace with the default link budget
/// (node 100 ms + uplink 350 ms + compute 50 ms).
ScenarioConfig default_config();

} // namespace agrimule::scenario
