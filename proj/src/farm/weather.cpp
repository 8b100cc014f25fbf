#include "agrimule/farm/weather.hpp"

#include <algorithm>

#include "agrimule/error.hpp"

namespace agrimule::farm {

WeatherTrace::WeatherTrace(std::vector<WeatherPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error("bad-weather", "empty trace");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto h = points_[i].value.humidity_pct;
        if (!(h >= 0.0 && h <= 100.0)) throw Error("bad-weather", "humidity outside [0, 100]");
        if (i > 0 && !(points_[i - 1].at < points_[i].at))
            throw Error("bad-weather", "times must strictly increase");
    }
}

Weather WeatherTrace::at(SimTime t) const {
    if (!covers(t)) throw Error("no-weather", "t = " + std::to_string(t.millis) + " ms");
    auto hi = std::lower_bound(points_.begin(), points_.end(), t,
                               [](const WeatherPoint& p, SimTime v) { return p.at < v; });
    if (hi->at == t) return hi->value;
    auto lo = std::prev(hi);
    const double span = static_cast<double>((hi->at - lo->at).count());
    const double f = static_cast<double>((t - lo->at).count()) / span;
    return {lo->value.temperature_c + f * (hi->value.temperature_c - lo->value.temperature_c),
            lo->value.humidity_pct + f * (hi->value.humidity_pct - lo->value.humidity_pct)};
}

WeatherTrace WeatherTrace::constant(Weather w, SimTime until) {
    if (until.millis == 0) until.millis = 1;
    return WeatherTrace({{SimTime{0}, w}, {until, w}});
}

} // namespace agrimule::farm
