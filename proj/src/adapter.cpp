#include "chessy/adapter.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/log.hpp"

namespace chessy {

namespace {

using SteadyClock = std::chrono::steady_clock;

double ms_between(SteadyClock::time_point a, SteadyClock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

/// Steps (a)-(f) for one trapped access; resume happens in the caller.
AccessEntry service_one(RspClient& client, SimKernel& kernel, const SessionConfig& cfg,
                        FunctionalTrace& functional) {
    // (a) fetch and decode the mailbox record
    const std::vector<std::uint8_t> mailbox = client.read_mem(cfg.layout.mailbox, kMailboxBytes);
    const TransactionRecord rec = decode_transaction(mailbox);

    // (b) writes carry a payload in target memory at data_ptr
    VpRequest req;
    req.is_read = rec.is_read;
    req.addr = rec.addr;
    req.size_bytes = rec.size_bytes;
    req.timestamp = rec.timestamp;
    if (!rec.is_read)
        req.payload = client.read_mem(rec.data_ptr, rec.size_bytes);

    // (c) the simulation may only move forward
    if (rec.timestamp < kernel.now())
        throw TimeRegression("target timestamp " + std::to_string(rec.timestamp.micros) +
                             " us behind simulation time " +
                             std::to_string(kernel.now().micros) + " us");
    kernel.advance_to(rec.timestamp);

    // (d) peripheral service
    const VpResponse resp = kernel.dispatch(req);

    // (e) read results go back into target memory
    if (rec.is_read)
        client.write_mem(rec.data_ptr, resp.payload);

    // (f) mtime := timestamp + simulated_delay, written before resuming so
    // the target's first post-resume timer read already sees it
    const std::uint64_t mtime_us = checked_add(rec.timestamp.micros, resp.simulated_delay_us);
    client.write_u64(cfg.layout.mtime, mtime_us);

    AccessEntry entry;
    entry.record = rec;
    entry.delay_us = resp.simulated_delay_us;
    entry.bytes_moved = rec.size_bytes;
    if (cfg.verify_mtime)
        entry.mtime_readback_us = client.read_u64(cfg.layout.mtime);

    functional.push_back(AccessEvent{rec.is_read, rec.addr, rec.size_bytes,
                                     rec.is_read ? resp.payload : req.payload});
    return entry;
}

} // namespace

SessionResult run_session(const SessionConfig& cfg, SimKernel& kernel) {
    if (cfg.clock.timer_hz != 1'000'000)
        throw ConfigError("the co-emulation protocol requires timer_hz == 1000000");

    RspClient client = RspClient::connect(cfg.host, cfg.port, cfg.link_timeout_ms);
    log_info("session: connected to " + cfg.host + ":" + std::to_string(cfg.port));

    const rsp::StopReply initial = client.query_halt();
    if (initial.kind != rsp::StopReply::Kind::breakpoint)
        throw UnknownStopReply("target not halted at attach");

    // One breakpoint for the whole session; per-access Z0/z0 traffic is not
    // needed because the stub address never changes.
    client.set_breakpoint(cfg.layout.chessy_access);

    SessionResult result;
    client.send_continue();
    for (;;) {
        const rsp::StopReply stop = client.wait_stop();
        const auto stop_seen = SteadyClock::now();
        if (stop.kind == rsp::StopReply::Kind::exited) {
            result.target_exit_code = stop.value;
            break;
        }

        AccessEntry entry = service_one(client, kernel, cfg, result.functional);
        client.send_continue();
        entry.wall_ms = ms_between(stop_seen, SteadyClock::now());

        if (!result.trace.empty() &&
            entry.record.timestamp < result.trace.back().record.timestamp)
            throw TimeRegression("access timestamps went backwards");
        result.trace.push_back(std::move(entry));
    }

    result.end_time_us = kernel.now().micros;
    result.peripheral_digest = kernel.state_digest();
    for (const auto& mapping : kernel.mappings()) {
        if (auto arm = std::dynamic_pointer_cast<RobotArm>(mapping.dev)) {
            result.arm_log.insert(result.arm_log.end(), arm->command_log().begin(),
                                  arm->command_log().end());
        }
    }
    log_info("session: target exited with code " + std::to_string(result.target_exit_code) +
             " after " + std::to_string(result.trace.size()) + " accesses");
    return result;
}

SessionResult run_session(const SessionConfig& cfg) {
    SimKernel kernel = build_kernel(cfg.map, cfg.seed, cfg.bus_miss);
    return run_session(cfg, kernel);
}

void write_trace_csv(std::ostream& os, const std::vector<AccessEntry>& trace) {
    os << "idx,is_read,addr,size,timestamp_us,delay_us,wall_ms\n";
    char wall[32];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const AccessEntry& e = trace[i];
        std::snprintf(wall, sizeof(wall), "%.6f", e.wall_ms);
        os << i << "," << (e.record.is_read ? 1 : 0) << ",0x" << hex_u64(e.record.addr) << ","
           << e.record.size_bytes << "," << e.record.timestamp.micros << "," << e.delay_us << ","
           << wall << "\n";
    }
}

} // namespace chessy
