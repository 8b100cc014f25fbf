// agrimule: run a scenario headless or behind the control service, or
// recompute a report from a telemetry log.
//
// Exit codes: 0 ok, 2 invalid configuration, 3 I/O failure.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "agrimule/error.hpp"
#include "agrimule/scenario/config.hpp"
#include "agrimule/scenario/report.hpp"
#include "agrimule/scenario/scenario.hpp"
#include "agrimule/service/control_service.hpp"
#include "agrimule/service/sim_host.hpp"

namespace fs = std::filesystem;
using namespace agrimule;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw Error("io-error", "cannot write " + path.string());
}

struct RunArgs {
    std::string config;
    bool serve = false;
    double pace = 1.0;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<int> port;
};

int run(const RunArgs& args) {
    scenario::ScenarioConfig config = scenario::load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    if (args.port) config.service.port = *args.port;

    std::error_code ec;
    fs::create_directories(args.out, ec);
    if (ec) throw Error("io-error", "cannot create " + args.out + ": " + ec.message());
    const fs::path log = fs::path(args.out) / "telemetry.log";
    const fs::path report_path = fs::path(args.out) / "report.json";

    scenario::Scenario sim(config, store::TelemetryStore::create(log, scenario::header_for(config)));

    if (!args.serve) {
        const auto started = std::chrono::steady_clock::now();
        const auto rr = sim.run();
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const std::string text = scenario::report_text(scenario::build_report(sim.store()));
        write_file(report_path, text);
        std::cout << text;
        std::cerr << "ran " << rr.events_executed << " events to t=" << rr.final_clock.millis << " ms in " << wall
                  << " s; wrote " << log.string() << " and " << report_path.string() << "\n";
        return kExitOk;
    }

    service::SimHost host(sim, {args.pace});
    service::ControlService api(host);
    const int port = api.start(config.service.host, config.service.port);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving http://" << config.service.host << ":" << port << "/v1 (pace "
              << (args.pace > 0 ? std::to_string(args.pace) : std::string("manual")) << "); Ctrl-C to stop\n";
    host.start();
    bool announced = false;
    while (!g_interrupted) {
        if (host.finished() && !announced) {
            std::cerr << "scenario reached its end; still serving\n";
            announced = true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    api.stop();
    host.stop();
    const std::string text = scenario::report_text(scenario::build_report(sim.store()));
    write_file(report_path, text);
    std::cout << text;
    return kExitOk;
}

int replay(const std::string& path, const std::string& out) {
    store::TelemetryStore s = store::TelemetryStore::open(path);
    for (const auto& w : s.warnings()) std::cerr << "warning: " << w << "\n";
    const std::string text = scenario::report_text(scenario::build_report(s));
    if (!out.empty()) write_file(out, text);
    std::cout << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"agrimule: UAV data-mule irrigation simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario");
    run_cmd->add_option("config", run_args.config, "Scenario config (JSON)")->required();
    run_cmd->add_flag("--serve", run_args.serve, "Serve the control API while the scenario runs paced");
    run_cmd->add_option("--pace", run_args.pace, "Sim ms per wall ms when serving (0: manual stepping)")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--seed", run_args.seed, "Override the config seed");
    run_cmd->add_option("--out", run_args.out, "Output directory for telemetry.log and report.json");
    run_cmd->add_option("--port", run_args.port, "Override the service port (0: any free port)");

    std::string log_path, replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "Recompute the run report from a telemetry log");
    replay_cmd->add_option("log", log_path, "Telemetry log")->required();
    replay_cmd->add_option("--out", replay_out, "Also write the report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(run_args);
        return replay(log_path, replay_out);
    } catch (const scenario::ConfigError& e) {
        std::cerr << "invalid configuration:\n";
        for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == "io-error" || e.code() == "bad-log" ? kExitIo : kExitValidation;
    }
}
