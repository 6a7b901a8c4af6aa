#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chessy/adapter.hpp"
#include "chessy/peripherals.hpp"
#include "chessy/script.hpp"
#include "chessy/sim_time.hpp"
#include "chessy/target.hpp"

namespace chessy {

/// How protocol cost is obtained: wall-clock measurement of a live session,
/// or the calibrated per-access/per-byte model.
enum class LinkMode { measured, modeled };

/// Cost model of the debugger link. The modeled defaults (80 ms per access,
/// 0.4 us per byte) are a declared calibration, not a measurement: they keep
/// per-access cost under 100 ms, overhead spread across transfer sizes under
/// 4%, and land the TempoNet profile overheads near 86%/47%.
struct LinkModel {
    LinkMode mode = LinkMode::modeled;
    double per_access_ms = 80.0;
    double per_byte_us = 0.4;
};

/// Per-run accounting. overhead_pct = 100 * protocol_cost / baseline.
struct SessionReport {
    std::uint64_t n_accesses = 0;
    std::uint64_t total_bytes = 0;
    std::uint64_t baseline_us = 0;
    double protocol_cost_ms = 0.0;
    double overhead_pct = 0.0;
};

/// What one access contributes to protocol cost.
struct AccessCost {
    std::uint64_t bytes = 0;
    double wall_ms = 0.0;
};

double modeled_access_cost_ms(const LinkModel& link, std::uint64_t bytes);

/// Throws DegenerateBaseline when baseline_us is zero.
SessionReport compute_overhead(std::span<const AccessCost> accesses, std::uint64_t baseline_us,
                               const LinkModel& link);

// --- canonical workloads ------------------------------------------------

inline constexpr std::uint64_t kTnsCycles = 14'000'000; // small TempoNet variant
inline constexpr std::uint64_t kTnbCycles = 28'000'000; // big TempoNet variant

inline constexpr std::uint64_t kEmgBase = 0x6000'0000;
inline constexpr std::uint64_t kArmBase = 0x6001'0000;
inline constexpr std::uint64_t kRegfileBase = 0x6002'0000;

inline constexpr std::uint64_t kEmgWindowBytes = 8; // 4 samples x 2 bytes
inline constexpr std::uint64_t kArmCommandBytes = 2;
inline constexpr std::uint64_t kAuxReadBytes = 4;

/// `loop iterations { read(regfile,size); compute(cycles); write(regfile,size,seed) }`
WorkloadScript generate_workload(std::uint64_t size_bytes, std::uint64_t compute_cycles,
                                 std::uint64_t iterations, std::uint64_t seed);

/// Per iteration: EMG window read, compute, arm command write, plus
/// (accesses_per_iter - 2) auxiliary register reads.
WorkloadScript profile_workload(std::uint64_t compute_cycles, unsigned accesses_per_iter,
                                std::uint64_t iterations, std::uint64_t seed);

enum class TempoNetVariant { tns, tnb };
std::uint64_t temponet_cycles(TempoNetVariant variant);
WorkloadScript temponet_profile(TempoNetVariant variant, unsigned accesses_per_iter = 3,
                                std::uint64_t iterations = 1);

/// Address map used by size/compute sweeps: one register file with 250 us
/// read/write latencies (keeps zero-compute points well-defined).
std::vector<MapEntry> sweep_map();

/// Address map of the biosignal profile: EMG sensor (1 kHz, 2-byte samples),
/// robot arm (500 us actuation), auxiliary register file.
std::vector<MapEntry> temponet_map();

// --- running workloads ----------------------------------------------------

/// Target emulator and adapter in one process over loopback.
struct SelfHostedRun {
    ServeResult target;
    SessionResult session;
};

SelfHostedRun run_self_hosted(const WorkloadScript& script, const ClockSpec& clock,
                              const std::vector<MapEntry>& map, std::uint64_t seed,
                              bool verify_mtime = false,
                              BusMissPolicy policy = BusMissPolicy::fatal);

struct SweepConfig {
    std::vector<std::uint64_t> sizes;
    std::vector<std::uint64_t> compute_cycles;
    std::uint64_t iterations = 10;
    ClockSpec clock;
    LinkModel link;
    std::uint64_t seed = 1;
};

struct SweepRow {
    std::string series;
    std::uint64_t size_bytes = 0;
    std::uint64_t compute_cycles = 0;
    std::uint64_t iterations = 0;
    std::uint64_t n_accesses = 0;
    std::uint64_t total_bytes = 0;
    std::uint64_t baseline_us = 0;
    double cost_ms = 0.0;
    double overhead_pct = 0.0;
};

/// Cross product of sizes and cycle counts, one row each. Modeled mode runs
/// only the in-process baseline (deterministic); measured mode runs a
/// self-hosted loopback session per row and sums wall-clock costs.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

SweepRow run_temponet(TempoNetVariant variant, std::uint64_t iterations, const ClockSpec& clock,
                      const LinkModel& link, std::uint64_t seed);

/// `size_bytes,compute_cycles,iterations,n_acc,baseline_us,cost_ms,overhead_pct`
std::string sweep_csv(std::span<const SweepRow> rows);

/// Long-form grouped series for plotting: `series,x,overhead_pct` with
/// x = compute_cycles.
std::string plot_data(std::span<const SweepRow> rows);

} // namespace chessy
