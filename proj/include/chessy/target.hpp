#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chessy/kernel.hpp"
#include "chessy/net.hpp"
#include "chessy/script.hpp"
#include "chessy/sim_time.hpp"
#include "chessy/symbols.hpp"
#include "chessy/transaction.hpp"

namespace chessy {

/// Sparse byte-addressable memory with the mtime register shadowed into the
/// address space: byte reads/writes overlapping the 8-byte timer window hit
/// the counter, everything else the page store. Unwritten bytes read 0.
class TargetMemory {
public:
    explicit TargetMemory(std::uint64_t mtime_addr) : mtime_addr_(mtime_addr) {}

    void read(std::uint64_t addr, std::span<std::uint8_t> out) const;
    void write(std::uint64_t addr, std::span<const std::uint8_t> in);

    std::uint64_t mtime_us() const { return mtime_us_; }
    void set_mtime_us(std::uint64_t us) { mtime_us_ = us; }

    /// Order-independent digest over all written pages plus mtime.
    std::uint64_t content_hash() const;

private:
    static constexpr std::uint64_t kPageBytes = 4096;

    std::uint64_t mtime_addr_;
    std::uint64_t mtime_us_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::uint8_t>> pages_;
};

/// Everything the process that ran the emulator learns after it finishes;
/// checkable in-process, invisible on the wire.
struct ServeResult {
    int exit_code = 0;              // W status the client saw (or would see)
    std::uint64_t final_mtime_us = 0;
    std::uint64_t traps = 0;        // accesses that stopped at the breakpoint
    FunctionalTrace trace;          // access stream as the target saw it
    bool client_disconnected = false;
};

/// Serve one RSP client on an already-bound listener and execute the script.
///
/// Each Read/Write step packages a TransactionRecord at the mailbox (write
/// payloads are pattern bytes placed at the data buffer), then stops with
/// T05 at the access-stub breakpoint if one is set, or (with no breakpoint)
/// services itself as open bus (zero reads, dropped writes, no delay).
/// Compute steps advance mtime by cycles_to_micros; mtime is frozen while
/// halted, so only host memory writes move it. Script end reports W00.
///
/// Accepts a single client; later connection attempts are refused.
ServeResult serve(const WorkloadScript& script, const ClockSpec& clock, TcpListener&& listener,
                  const TargetLayout& layout = {});

/// Run the script to completion with no debugger attached; every access is
/// serviced open-bus. The runnable-without-a-host mode.
ServeResult run_standalone(const WorkloadScript& script, const ClockSpec& clock,
                           const TargetLayout& layout = {});

/// A workload run with devices local: no stub, no halts, no protocol.
struct BaselineReport {
    std::uint64_t duration_us = 0; // sum of compute time and simulated delays
    FunctionalTrace trace;
    std::uint64_t n_accesses = 0;
    std::uint64_t total_bytes = 0;
};

/// Execute the script against in-process peripherals, mirroring exactly the
/// arithmetic of a full adapter session (timer law included). The oracle the
/// protocol path is checked against.
BaselineReport run_baseline(const WorkloadScript& script, const ClockSpec& clock,
                            SimKernel& kernel);

} // namespace chessy
