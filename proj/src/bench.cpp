#include "chessy/bench.hpp"

#include <cstdio>
#include <exception>
#include <thread>
#include <utility>

#include "chessy/errors.hpp"

namespace chessy {

double modeled_access_cost_ms(const LinkModel& link, std::uint64_t bytes) {
    return link.per_access_ms + link.per_byte_us * static_cast<double>(bytes) / 1000.0;
}

SessionReport compute_overhead(std::span<const AccessCost> accesses, std::uint64_t baseline_us,
                               const LinkModel& link) {
    if (baseline_us == 0)
        throw DegenerateBaseline("baseline duration is zero");
    SessionReport report;
    report.baseline_us = baseline_us;
    for (const AccessCost& a : accesses) {
        report.n_accesses += 1;
        report.total_bytes += a.bytes;
        report.protocol_cost_ms += link.mode == LinkMode::modeled
                                       ? modeled_access_cost_ms(link, a.bytes)
                                       : a.wall_ms;
    }
    report.overhead_pct =
        100.0 * report.protocol_cost_ms / (static_cast<double>(baseline_us) / 1000.0);
    return report;
}

// --- canonical workloads ------------------------------------------------

WorkloadScript generate_workload(std::uint64_t size_bytes, std::uint64_t compute_cycles,
                                 std::uint64_t iterations, std::uint64_t seed) {
    if (size_bytes < kMinTransferBytes || size_bytes > kMaxTransferBytes)
        throw EncodingBounds("workload transfer size outside 1..65536");
    LoopStep loop;
    loop.count = iterations;
    loop.body.push_back(Step{ReadStep{kRegfileBase, size_bytes}});
    loop.body.push_back(Step{ComputeStep{compute_cycles}});
    loop.body.push_back(Step{WriteStep{kRegfileBase, size_bytes, seed}});
    WorkloadScript script;
    script.steps.push_back(Step{std::move(loop)});
    return script;
}

WorkloadScript profile_workload(std::uint64_t compute_cycles, unsigned accesses_per_iter,
                                std::uint64_t iterations, std::uint64_t seed) {
    if (accesses_per_iter < 2)
        throw ConfigError("profile needs at least the sensor read and the command write");
    LoopStep loop;
    loop.count = iterations;
    loop.body.push_back(Step{ReadStep{kEmgBase, kEmgWindowBytes}});
    loop.body.push_back(Step{ComputeStep{compute_cycles}});
    loop.body.push_back(Step{WriteStep{kArmBase, kArmCommandBytes, seed}});
    for (unsigned i = 2; i < accesses_per_iter; ++i)
        loop.body.push_back(Step{ReadStep{kRegfileBase, kAuxReadBytes}});
    WorkloadScript script;
    script.steps.push_back(Step{std::move(loop)});
    return script;
}

std::uint64_t temponet_cycles(TempoNetVariant variant) {
    return variant == TempoNetVariant::tns ? kTnsCycles : kTnbCycles;
}

WorkloadScript temponet_profile(TempoNetVariant variant, unsigned accesses_per_iter,
                                std::uint64_t iterations) {
    return profile_workload(temponet_cycles(variant), accesses_per_iter, iterations, 7);
}

std::vector<MapEntry> sweep_map() {
    MapEntry reg;
    reg.base = kRegfileBase;
    reg.length = 0x10000;
    reg.kind = "regfile";
    reg.params["read_latency_us"] = "250";
    reg.params["write_latency_us"] = "250";
    return {reg};
}

std::vector<MapEntry> temponet_map() {
    MapEntry emg;
    emg.base = kEmgBase;
    emg.length = 0x1000;
    emg.kind = "emg";
    emg.params["period_us"] = "1000";
    emg.params["sample_bytes"] = "2";
    emg.params["epoch_us"] = "0";

    MapEntry arm;
    arm.base = kArmBase;
    arm.length = 0x1000;
    arm.kind = "arm";
    arm.params["latency_us"] = "500";

    MapEntry reg;
    reg.base = kRegfileBase;
    reg.length = 0x1000;
    reg.kind = "regfile";
    return {emg, arm, reg};
}

// --- running workloads ----------------------------------------------------

SelfHostedRun run_self_hosted(const WorkloadScript& script, const ClockSpec& clock,
                              const std::vector<MapEntry>& map, std::uint64_t seed,
                              bool verify_mtime, BusMissPolicy policy) {
    TcpListener listener = TcpListener::bind("127.0.0.1", 0);
    const std::uint16_t port = listener.port();

    ServeResult target_result;
    std::exception_ptr target_error;
    std::thread target([&, lis = std::move(listener)]() mutable {
        try {
            target_result = serve(script, clock, std::move(lis));
        } catch (...) {
            target_error = std::current_exception();
        }
    });

    SessionConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = port;
    cfg.map = map;
    cfg.clock = clock;
    cfg.bus_miss = policy;
    cfg.seed = seed;
    cfg.verify_mtime = verify_mtime;

    SelfHostedRun run;
    try {
        run.session = run_session(cfg);
    } catch (...) {
        target.join(); // client socket is gone; the emulator unblocks and returns
        if (target_error)
            std::rethrow_exception(target_error);
        throw;
    }
    target.join();
    if (target_error)
        std::rethrow_exception(target_error);
    run.target = std::move(target_result);
    return run;
}

namespace {

std::vector<AccessCost> costs_from_baseline(const BaselineReport& baseline) {
    std::vector<AccessCost> costs;
    costs.reserve(baseline.trace.size());
    for (const AccessEvent& ev : baseline.trace)
        costs.push_back(AccessCost{ev.size_bytes, 0.0});
    return costs;
}

std::vector<AccessCost> costs_from_session(const SessionResult& session) {
    std::vector<AccessCost> costs;
    costs.reserve(session.trace.size());
    for (const AccessEntry& e : session.trace)
        costs.push_back(AccessCost{e.bytes_moved, e.wall_ms});
    return costs;
}

SweepRow make_row(std::string series, std::uint64_t size_bytes, std::uint64_t cycles,
                  std::uint64_t iterations, const SessionReport& report) {
    SweepRow row;
    row.series = std::move(series);
    row.size_bytes = size_bytes;
    row.compute_cycles = cycles;
    row.iterations = iterations;
    row.n_accesses = report.n_accesses;
    row.total_bytes = report.total_bytes;
    row.baseline_us = report.baseline_us;
    row.cost_ms = report.protocol_cost_ms;
    row.overhead_pct = report.overhead_pct;
    return row;
}

SessionReport run_one(const WorkloadScript& script, const ClockSpec& clock,
                      const std::vector<MapEntry>& map, std::uint64_t seed,
                      const LinkModel& link) {
    SimKernel baseline_kernel = build_kernel(map, seed, BusMissPolicy::fatal);
    const BaselineReport baseline = run_baseline(script, clock, baseline_kernel);

    if (link.mode == LinkMode::modeled)
        return compute_overhead(costs_from_baseline(baseline), baseline.duration_us, link);

    const SelfHostedRun run = run_self_hosted(script, clock, map, seed);
    return compute_overhead(costs_from_session(run.session), baseline.duration_us, link);
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.sizes.empty() || cfg.compute_cycles.empty())
        throw ConfigError("sweep needs at least one size and one cycle count");
    std::vector<SweepRow> rows;
    for (const std::uint64_t size : cfg.sizes) {
        for (const std::uint64_t cycles : cfg.compute_cycles) {
            const WorkloadScript script =
                generate_workload(size, cycles, cfg.iterations, cfg.seed);
            const SessionReport report =
                run_one(script, cfg.clock, sweep_map(), cfg.seed, cfg.link);
            rows.push_back(make_row("size=" + std::to_string(size) + "B", size, cycles,
                                    cfg.iterations, report));
        }
    }
    return rows;
}

SweepRow run_temponet(TempoNetVariant variant, std::uint64_t iterations, const ClockSpec& clock,
                      const LinkModel& link, std::uint64_t seed) {
    const WorkloadScript script = temponet_profile(variant, 3, iterations);
    const SessionReport report = run_one(script, clock, temponet_map(), seed, link);
    const std::uint64_t bytes_per_iter =
        iterations > 0 ? report.total_bytes / iterations : 0;
    return make_row(variant == TempoNetVariant::tns ? "TNS" : "TNB", bytes_per_iter,
                    temponet_cycles(variant), iterations, report);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "size_bytes,compute_cycles,iterations,n_acc,baseline_us,cost_ms,"
                      "overhead_pct\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        out += std::to_string(r.size_bytes) + "," + std::to_string(r.compute_cycles) + "," +
               std::to_string(r.iterations) + "," + std::to_string(r.n_accesses) + "," +
               std::to_string(r.baseline_us) + ",";
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", r.cost_ms, r.overhead_pct);
        out += buf;
    }
    return out;
}

std::string plot_data(std::span<const SweepRow> rows) {
    std::string out = "series,x,overhead_pct\n";
    char buf[32];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.overhead_pct);
        out += r.series + "," + std::to_string(r.compute_cycles) + "," + buf + "\n";
    }
    return out;
}

} // namespace chessy
