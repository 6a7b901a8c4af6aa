// chessy CLI: virtual-FPGA target emulator, host adapter, and overhead
// benchmarks over a bit-exact debugger wire protocol.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chessy/adapter.hpp"
#include "chessy/bench.hpp"
#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/log.hpp"
#include "chessy/net.hpp"
#include "chessy/peripherals.hpp"
#include "chessy/script.hpp"
#include "chessy/symbols.hpp"
#include "chessy/target.hpp"

namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const chessy::LinkError*>(&e))
        return 4;
    if (dynamic_cast<const chessy::ConfigError*>(&e))
        return 2;
    if (dynamic_cast<const chessy::Error*>(&e))
        return 3;
    return 1;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv, const char* what) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string tok =
            csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok.empty())
            throw chessy::ConfigError(std::string("empty entry in ") + what + " list");
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size() || v < 0 || v != std::floor(v) || v > 1.8e19)
                throw std::invalid_argument(tok);
            out.push_back(static_cast<std::uint64_t>(v));
        } catch (const std::exception&) {
            throw chessy::ConfigError(std::string("bad value '") + tok + "' in " + what +
                                      " list");
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw chessy::ConfigError("cannot open output file '" + path + "'");
    out << content;
}

chessy::BusMissPolicy parse_bus_miss(const std::string& name) {
    if (name == "fatal")
        return chessy::BusMissPolicy::fatal;
    if (name == "open")
        return chessy::BusMissPolicy::open;
    throw chessy::ConfigError("--bus-miss must be 'fatal' or 'open'");
}

int cmd_target(const std::string& script_path, std::uint64_t clock_hz,
               const std::string& listen, bool standalone) {
    const chessy::WorkloadScript script = chessy::load_script(script_path);
    const chessy::ClockSpec clock{clock_hz, 1'000'000};

    if (standalone) {
        const chessy::ServeResult result = chessy::run_standalone(script, clock);
        std::cout << "standalone done: accesses=" << result.trace.size()
                  << " final_mtime_us=" << result.final_mtime_us << "\n";
        return result.exit_code == 0 ? 0 : 1;
    }

    const auto [host, port] = chessy::parse_endpoint(listen);
    chessy::TcpListener listener = chessy::TcpListener::bind(host, port);
    std::cout << "listening on " << host << ":" << listener.port() << std::endl;
    const chessy::ServeResult result = chessy::serve(script, clock, std::move(listener));
    std::cout << "target done: traps=" << result.traps
              << " final_mtime_us=" << result.final_mtime_us
              << " exit_code=" << result.exit_code << "\n";
    if (result.client_disconnected)
        return 4;
    return result.exit_code == 0 ? 0 : 1;
}

int cmd_run(const std::string& target, const std::string& map_path,
            const std::string& symbols_path, std::uint64_t clock_hz,
            const std::string& bus_miss, const std::string& trace_path,
            const std::string& arm_log_path, bool verify, int timeout_ms, std::uint64_t seed) {
    chessy::SessionConfig cfg;
    std::tie(cfg.host, cfg.port) = chessy::parse_endpoint(target);
    cfg.map = chessy::load_address_map(map_path);
    if (!symbols_path.empty())
        cfg.layout = chessy::load_symbols(symbols_path);
    cfg.clock = chessy::ClockSpec{clock_hz, 1'000'000};
    cfg.bus_miss = parse_bus_miss(bus_miss);
    cfg.seed = seed;
    cfg.verify_mtime = verify;
    cfg.link_timeout_ms = timeout_ms;

    const chessy::SessionResult result = chessy::run_session(cfg);

    double wall_cost_ms = 0.0;
    std::uint64_t total_bytes = 0;
    for (const chessy::AccessEntry& e : result.trace) {
        wall_cost_ms += e.wall_ms;
        total_bytes += e.bytes_moved;
    }
    std::cout << "n_accesses=" << result.trace.size() << " total_bytes=" << total_bytes
              << " simulated_end_us=" << result.end_time_us;
    char buf[64];
    std::snprintf(buf, sizeof(buf), " protocol_wall_ms=%.6f", wall_cost_ms);
    std::cout << buf;
    if (result.end_time_us > 0) {
        std::snprintf(buf, sizeof(buf), " overhead_pct=%.6f",
                      100.0 * wall_cost_ms / (static_cast<double>(result.end_time_us) / 1000.0));
        std::cout << buf;
    }
    std::cout << " exit_code=" << result.target_exit_code << "\n";

    if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out)
            throw chessy::ConfigError("cannot open trace file '" + trace_path + "'");
        chessy::write_trace_csv(out, result.trace);
    }
    if (!arm_log_path.empty()) {
        std::ofstream out(arm_log_path, std::ios::binary);
        if (!out)
            throw chessy::ConfigError("cannot open arm log file '" + arm_log_path + "'");
        out << "time_us,hex_payload\n";
        for (const auto& entry : result.arm_log)
            out << entry.time.micros << "," << chessy::to_hex(entry.payload) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chessy: co-emulation of a debugger-controlled target with "
                 "simulated peripherals"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file ([section] per subcommand)");
    app.allow_config_extras(false);

    std::string log_level = "info";
    std::uint64_t seed = 1;
    app.add_option("--log-level", log_level, "error|warn|info|debug")->capture_default_str();
    app.add_option("--seed", seed, "default seed for pattern data")->capture_default_str();

    // --- target ---------------------------------------------------------
    auto* target_cmd = app.add_subcommand("target", "serve a workload script as a virtual FPGA");
    std::string script_path, listen = "127.0.0.1:3333";
    std::uint64_t target_clock_hz = 50'000'000;
    bool standalone = false;
    target_cmd->add_option("--script", script_path, "workload script file")->required();
    target_cmd->add_option("--clock-hz", target_clock_hz, "core clock rate")
        ->capture_default_str();
    target_cmd->add_option("--listen", listen, "HOST:PORT to listen on")->capture_default_str();
    target_cmd->add_flag("--standalone", standalone, "run without a debugger, open-bus accesses");

    // --- run -----------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "drive a target as the host adapter");
    std::string target_ep, map_path, symbols_path, bus_miss = "fatal", trace_path, arm_log_path;
    std::uint64_t run_clock_hz = 50'000'000;
    bool verify = false;
    int timeout_ms = 10'000;
    run_cmd->add_option("--target", target_ep, "HOST:PORT of the target")->required();
    run_cmd->add_option("--map", map_path, "address-map file")->required();
    run_cmd->add_option("--symbols", symbols_path, "symbol file (name address per line)");
    run_cmd->add_option("--clock-hz", run_clock_hz, "core clock rate")->capture_default_str();
    run_cmd->add_option("--bus-miss", bus_miss, "fatal|open")->capture_default_str();
    run_cmd->add_option("--trace", trace_path, "write per-access trace CSV");
    run_cmd->add_option("--arm-log", arm_log_path, "write robot-arm command log CSV");
    run_cmd->add_flag("--verify", verify, "re-read mtime after each write-back");
    run_cmd->add_option("--timeout-ms", timeout_ms, "link receive timeout")
        ->capture_default_str();

    // --- bench ----------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "overhead benchmarks");
    bench_cmd->require_subcommand(1);

    auto* sweep_cmd = bench_cmd->add_subcommand("sweep", "size x compute-delay sweep");
    std::string sizes_csv = "4,64,1024,8192", cycles_csv = "0,100000,1000000,10000000";
    std::uint64_t iters = 10, bench_clock_hz = 50'000'000;
    std::string mode = "modeled", csv_path;
    double per_access_ms = 80.0, per_byte_us = 0.4;
    bool plot = false, self_hosted = false;
    sweep_cmd->add_option("--sizes", sizes_csv, "transfer sizes, bytes")->capture_default_str();
    sweep_cmd->add_option("--cycles", cycles_csv, "compute cycles (1e6 notation ok)")
        ->capture_default_str();
    sweep_cmd->add_option("--iters", iters, "iterations per point")->capture_default_str();
    sweep_cmd->add_option("--mode", mode, "modeled|measured")->capture_default_str();
    sweep_cmd->add_option("--per-access-ms", per_access_ms, "modeled cost per access")
        ->capture_default_str();
    sweep_cmd->add_option("--per-byte-us", per_byte_us, "modeled cost per byte")
        ->capture_default_str();
    sweep_cmd->add_option("--clock-hz", bench_clock_hz, "core clock rate")
        ->capture_default_str();
    sweep_cmd->add_option("--csv", csv_path, "output file (stdout if omitted)");
    sweep_cmd->add_flag("--plot-data", plot, "emit grouped series instead of the row CSV");
    sweep_cmd->add_flag("--self-hosted", self_hosted,
                        "spawn the target in-process (implied by measured mode)");

    auto* temponet_cmd = bench_cmd->add_subcommand("temponet", "biosignal profile overheads");
    std::string variant = "tns", tn_mode = "modeled", tn_csv_path;
    std::uint64_t tn_iters = 20, tn_clock_hz = 50'000'000;
    double tn_per_access_ms = 80.0, tn_per_byte_us = 0.4;
    bool tn_plot = false;
    temponet_cmd->add_option("--variant", variant, "tns|tnb")->capture_default_str();
    temponet_cmd->add_option("--iters", tn_iters, "iterations")->capture_default_str();
    temponet_cmd->add_option("--mode", tn_mode, "modeled|measured")->capture_default_str();
    temponet_cmd->add_option("--per-access-ms", tn_per_access_ms, "modeled cost per access")
        ->capture_default_str();
    temponet_cmd->add_option("--per-byte-us", tn_per_byte_us, "modeled cost per byte")
        ->capture_default_str();
    temponet_cmd->add_option("--clock-hz", tn_clock_hz, "core clock rate")
        ->capture_default_str();
    temponet_cmd->add_option("--csv", tn_csv_path, "output file (stdout if omitted)");
    temponet_cmd->add_flag("--plot-data", tn_plot, "emit grouped series instead of the row CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints message / help text
        return code == 0 ? 0 : 2;
    }

    try {
        chessy::set_log_level(chessy::parse_log_level(log_level));

        if (target_cmd->parsed())
            return cmd_target(script_path, target_clock_hz, listen, standalone);

        if (run_cmd->parsed())
            return cmd_run(target_ep, map_path, symbols_path, run_clock_hz, bus_miss, trace_path,
                           arm_log_path, verify, timeout_ms, seed);

        if (sweep_cmd->parsed()) {
            if (mode != "modeled" && mode != "measured")
                throw chessy::ConfigError("--mode must be 'modeled' or 'measured'");
            chessy::SweepConfig cfg;
            cfg.sizes = parse_u64_list(sizes_csv, "--sizes");
            cfg.compute_cycles = parse_u64_list(cycles_csv, "--cycles");
            cfg.iterations = iters;
            cfg.clock = chessy::ClockSpec{bench_clock_hz, 1'000'000};
            cfg.link.mode =
                mode == "modeled" ? chessy::LinkMode::modeled : chessy::LinkMode::measured;
            cfg.link.per_access_ms = per_access_ms;
            cfg.link.per_byte_us = per_byte_us;
            cfg.seed = seed;
            (void)self_hosted; // measured mode always runs self-hosted sessions
            const std::vector<chessy::SweepRow> rows = chessy::run_sweep(cfg);
            write_output(csv_path, plot ? chessy::plot_data(rows) : chessy::sweep_csv(rows));
            return 0;
        }

        if (temponet_cmd->parsed()) {
            if (variant != "tns" && variant != "tnb")
                throw chessy::ConfigError("--variant must be 'tns' or 'tnb'");
            if (tn_mode != "modeled" && tn_mode != "measured")
                throw chessy::ConfigError("--mode must be 'modeled' or 'measured'");
            chessy::LinkModel link;
            link.mode =
                tn_mode == "modeled" ? chessy::LinkMode::modeled : chessy::LinkMode::measured;
            link.per_access_ms = tn_per_access_ms;
            link.per_byte_us = tn_per_byte_us;
            const chessy::ClockSpec clock{tn_clock_hz, 1'000'000};
            const chessy::TempoNetVariant v = variant == "tns" ? chessy::TempoNetVariant::tns
                                                               : chessy::TempoNetVariant::tnb;
            const chessy::SweepRow row = chessy::run_temponet(v, tn_iters, clock, link, seed);
            const std::vector<chessy::SweepRow> rows{row};
            write_output(tn_csv_path, tn_plot ? chessy::plot_data(rows) : chessy::sweep_csv(rows));
            return 0;
        }
    } catch (const std::exception& e) {
        chessy::log_error(e.what());
        return exit_code_for(e);
    }
    return 0;
}
