#pragma once

#include <vector>

#include "agrimule/core/time.hpp"

namespace agrimule::farm {

struct Weather {
    double temperature_c = 25.0;
    double humidity_pct = 50.0;
};

struct WeatherPoint {
    SimTime at;
    Weather value;
};

/// Piecewise-linear ambient conditions over the scenario.
class WeatherTrace {
public:
    /// Throws Error("bad-weather") unless times strictly increase and humidity is in [0, 100].
    explicit WeatherTrace(std::vector<WeatherPoint> points);

    /// Throws Error("no-weather") outside [begin(), end()].
    Weather at(SimTime t) const;

    bool covers(SimTime t) const noexcept { return !points_.empty() && t >= begin() && t <= end(); }
    SimTime begin() const noexcept { return points_.front().at; }
    SimTime end() const noexcept { return points_.back().at; }
    const std::vector<WeatherPoint>& points() const noexcept { return points_; }

    static WeatherTrace constant(Weather w, SimTime until);

private:
    std::vector<WeatherPoint> points_;
};

} // namespace agrimule::farm
