#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chessy/kernel.hpp"
#include "chessy/peripherals.hpp"
#include "chessy/rsp_client.hpp"
#include "chessy/sim_time.hpp"
#include "chessy/symbols.hpp"
#include "chessy/transaction.hpp"

namespace chessy {

/// Everything a host session needs to run.
struct SessionConfig {
    std::string host = "127.0.0.1";
    std::uint16_t port = 3333;
    TargetLayout layout;
    std::vector<MapEntry> map;
    ClockSpec clock;
    BusMissPolicy bus_miss = BusMissPolicy::fatal;
    std::uint64_t seed = 1;
    int link_timeout_ms = 10'000;

    /// Re-read mtime over the wire after each write-back and record the
    /// target-visible value (self-check for the timer law).
    bool verify_mtime = false;
};

/// One serviced breakpoint: the decoded request, the peripheral's latency,
/// and the host wall-clock cost from stop observed to resume sent.
struct AccessEntry {
    TransactionRecord record;
    std::uint64_t delay_us = 0;
    std::uint64_t bytes_moved = 0; // payload bytes of the access
    double wall_ms = 0.0;
    std::optional<std::uint64_t> mtime_readback_us; // set when verify_mtime is on
};

/// Outcome of a full adapter session.
struct SessionResult {
    std::vector<AccessEntry> trace;
    FunctionalTrace functional;
    std::uint64_t end_time_us = 0; // kernel time when the target exited
    int target_exit_code = 0;
    std::string peripheral_digest;
    std::vector<RobotArm::LogEntry> arm_log; // all arm devices, base-address order
};

/// Drive one target to completion: set the stub breakpoint, then loop
/// breakpoint -> read mailbox -> advance time -> dispatch -> write back
/// payload and mtime(timestamp + delay) -> resume, until the exit stop reply.
///
/// The kernel must be freshly built from the session's address map.
SessionResult run_session(const SessionConfig& cfg, SimKernel& kernel);

/// Convenience overload that builds the kernel from cfg.map.
SessionResult run_session(const SessionConfig& cfg);

/// Trace CSV: `idx,is_read,addr,size,timestamp_us,delay_us,wall_ms`.
void write_trace_csv(std::ostream& os, const std::vector<AccessEntry>& trace);

} // namespace chessy
