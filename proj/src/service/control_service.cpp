#include "agrimule/service/control_service.hpp"

#include <cctype>
#include <limits>

#include "agrimule/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace agrimule::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& detail) {
    send_json(res, status, {{"error", code}, {"detail", detail}});
}

int status_for(const std::string& code) {
    if (code == "unknown-region") return 404;
    if (code == "busy" || code == "paced") return 409;
    return 400;
}

/// Error::what() is "<code>: <detail>"; strip the code for the detail field.
std::string detail_of(const Error& e) {
    const std::string what = e.what();
    const std::string prefix = e.code() + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

RegionId region_param(const httplib::Request& req) {
    const std::string& s = req.matches[1];
    if (s.size() > 3) throw Error("unknown-region", s);
    return static_cast<RegionId>(std::stoi(s));
}

json policy_json(const cloud::IrrigationPolicy& p) {
    return {{"m_low", p.m_low}, {"m_high", p.m_high}, {"max_quantity_l", p.max_quantity_l}};
}

json region_summary(const scenario::Scenario& s, const Region& r) {
    const auto& pump = s.farm().pump(r.id);
    const auto latest = s.store().latest(r.id);
    const auto hold = s.engine().hold_until(r.id);
    const bool held = hold && s.kernel().now() < *hold;
    return {{"id", r.id},
            {"name", r.name},
            {"position", {r.position.x, r.position.y}},
            {"area_m2", r.area_m2},
            {"policy", policy_json(s.engine().policy(r.id))},
            {"pump",
             {{"on", pump.on},
              {"flow_lpm", pump.flow_lpm},
              {"total_delivered_l", pump.total_delivered_l},
              {"commanded_remaining_l", pump.commanded_remaining_l}}},
            {"override_hold_until", held ? json(hold->millis) : json(nullptr)},
            {"latest_reading", latest.reading ? store::to_json(*latest.reading) : json(nullptr)},
            {"latest_decision", latest.decision ? store::to_json(*latest.decision) : json(nullptr)}};
}

std::optional<std::uint64_t> u64_param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    const std::string v = req.get_param_value(name);
    std::size_t used = 0;
    std::uint64_t out = 0;
    try {
        if (!v.empty() && std::isdigit(static_cast<unsigned char>(v[0]))) out = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw Error("bad-param", std::string(name) + " must be a non-negative integer");
    return out;
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) throw Error("bad-body", "expected a JSON object");
        return j;
    } catch (const json::parse_error&) {
        throw Error("bad-body", "not valid JSON");
    }
}

} // namespace

ControlService::ControlService(SimHost& host) : host_(host), server_(std::make_unique<httplib::Server>()) { routes(); }

ControlService::~ControlService() { stop(); }

int ControlService::start(const std::string& host, int port) {
    if (port == 0)
        port_ = server_->bind_to_any_port(host);
    else
        port_ = server_->bind_to_port(host, port) ? port : -1;
    if (port_ < 0) throw Error("io-error", "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void ControlService::stop() {
    if (!thread_.joinable()) return;
    host_.events().close_all("shutdown");
    server_->stop();
    thread_.join();
}

void ControlService::routes() {
    auto& srv = *server_;

    // Wraps a handler: maps Error codes to statuses and applies request-id idempotency.
    auto guarded = [this](bool mutating, std::function<void(const httplib::Request&, httplib::Response&)> body) {
        return [this, mutating, body](const httplib::Request& req, httplib::Response& res) {
            std::string key = req.get_header_value("X-Request-Id");
            if (mutating && key.empty() && !req.body.empty()) {
                const json j = json::parse(req.body, nullptr, false);
                if (j.is_object() && j.contains("request_id") && j["request_id"].is_string())
                    key = j["request_id"].get<std::string>();
            }
            std::unique_lock<std::mutex> lock(idem_mutex_, std::defer_lock);
            if (mutating && !key.empty()) {
                key = req.method + " " + req.path + " " + key;
                lock.lock();
                if (const auto it = idempotent_.find(key); it != idempotent_.end()) {
                    res.status = it->second.status;
                    res.set_content(it->second.body, "application/json");
                    res.set_header("X-Idempotent-Replay", "1");
                    return;
                }
            }
            try {
                body(req, res);
            } catch (const Error& e) {
                send_error(res, status_for(e.code()), e.code(), detail_of(e));
            } catch (const std::exception& e) {
                send_error(res, 400, "bad-request", e.what());
            }
            if (lock.owns_lock()) idempotent_[key] = {res.status, res.body};
        };
    };

    srv.Get("/v1/status", guarded(false, [this](const httplib::Request&, httplib::Response& res) {
        const bool paced = host_.options().pace > 0;
        const double pace = host_.options().pace;
        const json body = host_.call([&](scenario::Scenario& s) {
            const auto& d = s.drone().state();
            const auto last = s.store().last_offset();
            return json{{"scenario", s.config().name},
                        {"seed", s.config().seed},
                        {"sim_time_ms", s.kernel().now().millis},
                        {"end_ms", s.end_time().millis},
                        {"finished", s.finalized()},
                        {"pace", paced ? json(pace) : json("manual")},
                        {"events_executed", s.kernel().events_executed()},
                        {"last_offset", last ? json(*last) : json(nullptr)},
                        {"drone",
                         {{"mode", mule::to_string(d.mode)},
                          {"x", d.position.x},
                          {"y", d.position.y},
                          {"region", d.region ? json(*d.region) : json(nullptr)}}}};
        });
        send_json(res, 200, body);
    }));

    srv.Get("/v1/regions", guarded(false, [this](const httplib::Request&, httplib::Response& res) {
        const json body = host_.call([](scenario::Scenario& s) {
            json regions = json::array();
            for (const auto& r : s.engine().regions()) regions.push_back(region_summary(s, r));
            return json{{"regions", regions}};
        });
        send_json(res, 200, body);
    }));

    srv.Get(R"(/v1/regions/(\d+)/telemetry)", guarded(false, [this](const httplib::Request& req, httplib::Response& res) {
        const RegionId id = region_param(req);
        std::optional<store::RecordKind> kind;
        if (req.has_param("kind")) kind = store::record_kind_from_string(req.get_param_value("kind"));
        const SimTime from{u64_param(req, "from").value_or(0)};
        const SimTime to{u64_param(req, "to").value_or(std::numeric_limits<std::uint64_t>::max())};
        const json body = host_.call([&](scenario::Scenario& s) {
            s.engine().region(id);
            json records = json::array();
            for (const auto& r : s.store().query(id, kind, from, to)) records.push_back(store::to_json(r));
            return json{{"region", id}, {"records", records}};
        });
        send_json(res, 200, body);
    }));

    srv.Post(R"(/v1/regions/(\d+)/pump)", guarded(true, [this](const httplib::Request& req, httplib::Response& res) {
        const RegionId id = region_param(req);
        const json j = parse_body(req);
        const std::string cmd = j.value("command", "");
        PumpCommand command;
        if (cmd == "on") {
            if (!j.contains("quantity_l") || !j["quantity_l"].is_number())
                throw Error("bad-quantity", "on needs a numeric quantity_l");
            command = PumpCommand::on(j["quantity_l"].get<double>());
        } else if (cmd == "off") {
            command = PumpCommand::off();
        } else {
            throw Error("bad-command", "command must be \"on\" or \"off\"");
        }
        const std::string op = j.value("operator", "operator");
        const json body = host_.call([&](scenario::Scenario& s) {
            s.pump_override(id, command, op);
            return json{{"region", id},
                        {"command", cmd},
                        {"quantity_l", command.quantity_l},
                        {"hold_until", s.engine().hold_until(id)->millis}};
        });
        send_json(res, 202, body);
    }));

    srv.Put(R"(/v1/regions/(\d+)/policy)", guarded(true, [this](const httplib::Request& req, httplib::Response& res) {
        const RegionId id = region_param(req);
        const json j = parse_body(req);
        const json body = host_.call([&](scenario::Scenario& s) {
            cloud::IrrigationPolicy p = s.engine().policy(id);
            try {
                p.m_low = j.value("m_low", p.m_low);
                p.m_high = j.value("m_high", p.m_high);
                p.max_quantity_l = j.value("max_quantity_l", p.max_quantity_l);
            } catch (const json::exception&) {
                throw Error("bad-policy", "policy fields must be numbers");
            }
            s.set_policy(id, p);
            return json{{"region", id}, {"policy", policy_json(p)}};
        });
        send_json(res, 200, body);
    }));

    srv.Post("/v1/drone/dispatch", guarded(true, [this](const httplib::Request&, httplib::Response& res) {
        const json body = host_.call([](scenario::Scenario& s) {
            const auto tour = s.dispatch_drone();
            return json{{"tour_id", tour}, {"mode", mule::to_string(s.drone().state().mode)}};
        });
        send_json(res, 202, body);
    }));

    srv.Post("/v1/sim/advance", guarded(true, [this](const httplib::Request& req, httplib::Response& res) {
        const json j = parse_body(req);
        if (!j.contains("ms") || !j["ms"].is_number_unsigned()) throw Error("bad-body", "ms must be a non-negative integer");
        const SimTime now = host_.advance(Millis{j["ms"].get<std::int64_t>()});
        send_json(res, 200, {{"sim_time_ms", now.millis}, {"finished", host_.finished()}});
    }));

    srv.Get("/v1/events", [this](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::uint64_t> after;
        bool follow = false;
        try {
            after = u64_param(req, "after");
            if (req.has_param("follow")) {
                const std::string f = req.get_param_value("follow");
                if (f != "0" && f != "1") throw Error("bad-param", "follow must be 0 or 1");
                follow = f == "1";
            }
        } catch (const Error& e) {
            send_error(res, 400, e.code(), detail_of(e));
            return;
        }
        if (!follow) {
            std::string out;
            for (const auto& line : host_.events().history(after)) out += line + "\n";
            res.set_content(out, "application/x-ndjson");
            return;
        }
        auto& hub = host_.events();
        auto sub = hub.subscribe(after);
        res.set_chunked_content_provider(
            "application/x-ndjson",
            [&hub, sub](std::size_t, httplib::DataSink& sink) {
                bool closed = false;
                const auto lines = hub.next(sub, std::chrono::milliseconds(200), closed);
                for (const auto& line : lines) {
                    const std::string chunk = line + "\n";
                    if (!sink.write(chunk.data(), chunk.size())) return false;
                }
                if (closed) sink.done();
                return true;
            },
            [&hub, sub](bool) { hub.unsubscribe(sub); });
    });
}

} // namespace agrimule::service
