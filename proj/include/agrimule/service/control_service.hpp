#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "agrimule/service/sim_host.hpp"

namespace httplib {
class Server;
}

namespace agrimule::service {

/// HTTP/JSON operator API under /v1 plus the NDJSON event stream.
///
///   GET  /v1/status
///   GET  /v1/regions
///   GET  /v1/regions/{id}/telemetry?kind=&from=&to=
///   POST /v1/regions/{id}/pump      {"command":"on","quantity_l":q} | {"command":"off"}
///   PUT  /v1/regions/{id}/policy    {"m_low":..,"m_high":..,"max_quantity_l":..}
///   POST /v1/drone/dispatch
///   POST /v1/sim/advance            {"ms":n}   (unpaced hosts only)
///   GET  /v1/events?after=N&follow=0|1
///
/// Mutating requests carrying the same request id (X-Request-Id header or a
/// "request_id" body field) are applied once; repeats get the first response.
class ControlService {
public:
    explicit ControlService(SimHost& host);
    ~ControlService();

    ControlService(const ControlService&) = delete;
    ControlService& operator=(const ControlService&) = delete;

    /// Binds and serves on a background thread; port 0 picks a free port.
    /// Returns the bound port. Throws Error("io-error") if binding fails.
    int start(const std::string& host, int port);
    void stop();
    int port() const noexcept { return port_; }

private:
    void routes();

    SimHost& host_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = -1;

    struct Cached {
        int status;
        std::string body;
    };
    std::mutex idem_mutex_;
    std::map<std::string, Cached> idempotent_;
};

} // namespace agrimule::service
