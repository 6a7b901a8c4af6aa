#include "chessy/target.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/log.hpp"
#include "chessy/pattern.hpp"
#include "chessy/rsp_channel.hpp"

namespace chessy {

// --- TargetMemory -----------------------------------------------------------

namespace {

// Length of the run starting at addr that stays on one side of the timer
// window [mtime, mtime+8): either entirely inside it or entirely outside.
std::uint64_t span_until_timer(std::uint64_t addr, std::uint64_t remaining,
                               std::uint64_t mtime_addr) {
    if (addr - mtime_addr < 8)
        return std::min<std::uint64_t>(remaining, 8 - (addr - mtime_addr));
    if (addr < mtime_addr)
        return std::min<std::uint64_t>(remaining, mtime_addr - addr);
    return remaining;
}

} // namespace

void TargetMemory::read(std::uint64_t addr, std::span<std::uint8_t> out) const {
    std::size_t i = 0;
    while (i < out.size()) {
        const std::uint64_t a = addr + i;
        std::uint64_t n = span_until_timer(a, out.size() - i, mtime_addr_);
        if (a - mtime_addr_ < 8) {
            for (std::uint64_t j = 0; j < n; ++j)
                out[i + j] = static_cast<std::uint8_t>(mtime_us_ >> (8 * (a - mtime_addr_ + j)));
        } else {
            const std::uint64_t off = a % kPageBytes;
            n = std::min<std::uint64_t>(n, kPageBytes - off);
            const auto it = pages_.find(a / kPageBytes);
            if (it == pages_.end())
                std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(i), n, 0);
            else
                std::copy_n(it->second.begin() + static_cast<std::ptrdiff_t>(off), n,
                            out.begin() + static_cast<std::ptrdiff_t>(i));
        }
        i += n;
    }
}

void TargetMemory::write(std::uint64_t addr, std::span<const std::uint8_t> in) {
    std::size_t i = 0;
    while (i < in.size()) {
        const std::uint64_t a = addr + i;
        std::uint64_t n = span_until_timer(a, in.size() - i, mtime_addr_);
        if (a - mtime_addr_ < 8) {
            for (std::uint64_t j = 0; j < n; ++j) {
                const int shift = static_cast<int>(8 * (a - mtime_addr_ + j));
                mtime_us_ = (mtime_us_ & ~(std::uint64_t{0xFF} << shift)) |
                            (std::uint64_t{in[i + j]} << shift);
            }
        } else {
            const std::uint64_t off = a % kPageBytes;
            n = std::min<std::uint64_t>(n, kPageBytes - off);
            auto [it, inserted] = pages_.try_emplace(a / kPageBytes);
            if (inserted)
                it->second.assign(kPageBytes, 0);
            std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(i), n,
                        it->second.begin() + static_cast<std::ptrdiff_t>(off));
        }
        i += n;
    }
}

std::uint64_t TargetMemory::content_hash() const {
    std::vector<std::uint64_t> keys;
    keys.reserve(pages_.size());
    for (const auto& [idx, page] : pages_)
        keys.push_back(idx);
    std::sort(keys.begin(), keys.end());

    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix_byte = [&h](std::uint8_t b) {
        h ^= b;
        h *= 0x100000001B3ull;
    };
    auto mix_u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i)
            mix_byte(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    for (std::uint64_t idx : keys) {
        mix_u64(idx);
        for (std::uint8_t b : pages_.at(idx))
            mix_byte(b);
    }
    mix_u64(mtime_us_);
    return h;
}

// --- script execution engine --------------------------------------------

namespace {

// Minimal RV64 target description so a stock debugger can attach and poke
// memory. Register values are all zero; the co-emulation protocol itself
// never touches registers.
std::string riscv_target_xml() {
    static const char* const kAbiNames[32] = {
        "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "fp", "s1", "a0",
        "a1",   "a2", "a3", "a4", "a5", "a6", "a7", "s2", "s3", "s4", "s5",
        "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
    std::string xml = "<?xml version=\"1.0\"?>\n"
                      "<!DOCTYPE target SYSTEM \"gdb-target.dtd\">\n"
                      "<target version=\"1.0\">\n"
                      "<architecture>riscv:rv64</architecture>\n"
                      "<feature name=\"org.gnu.gdb.riscv.cpu\">\n";
    for (const char* name : kAbiNames)
        xml += "<reg name=\"" + std::string(name) + "\" bitsize=\"64\" type=\"int\"/>\n";
    xml += "<reg name=\"pc\" bitsize=\"64\" type=\"code_ptr\"/>\n"
           "</feature>\n</target>\n";
    return xml;
}

constexpr int kRiscvRegs = 33; // x0..x31 + pc

/// Payload bytes of the write_index-th executed write step. Shared by the
/// emulator and run_baseline so both routes generate identical content.
std::vector<std::uint8_t> write_payload(std::uint64_t seed, std::uint64_t write_index,
                                        std::uint64_t size) {
    std::vector<std::uint8_t> out(size);
    for (std::uint64_t j = 0; j < size; ++j)
        out[j] = pattern_byte(seed, (write_index << 32) | j);
    return out;
}

void require_microsecond_timer(const ClockSpec& clock) {
    if (!clock.valid())
        throw ConfigError("clock rates must be positive");
    if (clock.timer_hz != 1'000'000)
        throw ConfigError("the co-emulation protocol requires timer_hz == 1000000 "
                          "(mtime ticks must be microseconds)");
}

struct PendingAccess {
    bool is_read;
    std::uint64_t data_ptr;
    std::uint64_t size_bytes;
    std::size_t trace_index;
};

class TargetSession {
public:
    TargetSession(const WorkloadScript& script, const ClockSpec& clock,
                  const TargetLayout& layout)
        : cursor_(script), clock_(clock), layout_(layout), mem_(layout.mtime) {
        require_microsecond_timer(clock);
        validate_script(script);
    }

    ServeResult run_connected(TcpListener&& listener);
    ServeResult run_standalone();

private:
    enum class Outcome { trapped, finished };

    Outcome run_script();
    std::string handle_packet(const std::string& payload);
    std::string read_mem_cmd(const std::string& args) const;
    std::string write_mem_cmd(const std::string& args);

    ScriptCursor cursor_;
    ClockSpec clock_;
    TargetLayout layout_;
    TargetMemory mem_;
    std::set<std::uint64_t> breakpoints_;
    std::optional<PendingAccess> pending_;
    std::uint64_t write_index_ = 0;
    bool exited_ = false;
    bool kill_requested_ = false;
    std::string last_stop_ = "S05";
    ServeResult result_;
};

TargetSession::Outcome TargetSession::run_script() {
    if (pending_) {
        // Resuming: a read step now picks up whatever the host wrote into
        // the response buffer.
        if (pending_->is_read) {
            std::vector<std::uint8_t> data(pending_->size_bytes);
            mem_.read(pending_->data_ptr, data);
            result_.trace[pending_->trace_index].data = std::move(data);
        }
        pending_.reset();
    }

    while (auto step = cursor_.next()) {
        if (const auto* c = std::get_if<ComputeStep>(&*step)) {
            mem_.set_mtime_us(checked_add(mem_.mtime_us(), cycles_to_micros(c->cycles, clock_)));
            continue;
        }

        const bool is_read = std::holds_alternative<ReadStep>(*step);
        const std::uint64_t addr = is_read ? std::get<ReadStep>(*step).addr
                                           : std::get<WriteStep>(*step).addr;
        const std::uint64_t size = is_read ? std::get<ReadStep>(*step).size_bytes
                                           : std::get<WriteStep>(*step).size_bytes;

        std::vector<std::uint8_t> payload;
        if (!is_read) {
            payload = write_payload(std::get<WriteStep>(*step).seed, write_index_++, size);
            mem_.write(layout_.mailbox_data, payload);
        }

        if (breakpoints_.count(layout_.chessy_access) != 0) {
            const TransactionRecord rec{is_read, addr, layout_.mailbox_data, size,
                                        SimTime{mem_.mtime_us()}};
            const auto bytes = encode_transaction(rec);
            mem_.write(layout_.mailbox, bytes);
            result_.trace.push_back(AccessEvent{is_read, addr, size, payload});
            result_.traps += 1;
            pending_ = PendingAccess{is_read, layout_.mailbox_data, size,
                                     result_.trace.size() - 1};
            return Outcome::trapped;
        }

        // No breakpoint: open-bus self-service, zero delay.
        if (is_read) {
            std::vector<std::uint8_t> zeros(size, 0);
            mem_.write(layout_.mailbox_data, zeros);
            result_.trace.push_back(AccessEvent{true, addr, size, std::move(zeros)});
        } else {
            result_.trace.push_back(AccessEvent{false, addr, size, std::move(payload)});
        }
    }

    exited_ = true;
    result_.exit_code = 0;
    result_.final_mtime_us = mem_.mtime_us();
    return Outcome::finished;
}

std::string TargetSession::read_mem_cmd(const std::string& args) const {
    const auto comma = args.find(',');
    if (comma == std::string::npos)
        return "E01";
    std::uint64_t addr = 0, len = 0;
    try {
        addr = parse_hex_u64(args.substr(0, comma));
        len = parse_hex_u64(args.substr(comma + 1));
    } catch (const FramingError&) {
        return "E01";
    }
    std::vector<std::uint8_t> bytes(len);
    mem_.read(addr, bytes);
    return to_hex(bytes);
}

std::string TargetSession::write_mem_cmd(const std::string& args) {
    const auto comma = args.find(',');
    const auto colon = args.find(':');
    if (comma == std::string::npos || colon == std::string::npos || colon < comma)
        return "E02";
    try {
        const std::uint64_t addr = parse_hex_u64(args.substr(0, comma));
        const std::uint64_t len = parse_hex_u64(args.substr(comma + 1, colon - comma - 1));
        const std::vector<std::uint8_t> bytes = from_hex(args.substr(colon + 1));
        if (bytes.size() != len)
            return "E02";
        mem_.write(addr, bytes);
        return "OK";
    } catch (const FramingError&) {
        return "E02";
    }
}

std::string TargetSession::handle_packet(const std::string& p) {
    if (p == "?")
        return last_stop_;
    if (p == "c") {
        if (exited_)
            return last_stop_;
        last_stop_ = run_script() == Outcome::trapped ? "T05" : "W00";
        return last_stop_;
    }
    if (!p.empty() && p[0] == 'm')
        return read_mem_cmd(p.substr(1));
    if (!p.empty() && p[0] == 'M')
        return write_mem_cmd(p.substr(1));
    if (p.rfind("Z0,", 0) == 0 || p.rfind("z0,", 0) == 0) {
        const auto comma = p.find(',', 3);
        std::uint64_t addr = 0;
        try {
            addr = parse_hex_u64(p.substr(3, comma == std::string::npos ? std::string::npos
                                                                        : comma - 3));
        } catch (const FramingError&) {
            return "E03";
        }
        if (p[0] == 'Z')
            breakpoints_.insert(addr); // re-set is idempotent
        else
            breakpoints_.erase(addr);
        return "OK";
    }
    if (p.rfind("qSupported", 0) == 0)
        return "PacketSize=20000;qXfer:features:read+;swbreak+";
    if (p.rfind("qXfer:features:read:target.xml:", 0) == 0) {
        const std::string range = p.substr(p.rfind(':') + 1);
        const auto comma = range.find(',');
        if (comma == std::string::npos)
            return "E00";
        try {
            const std::uint64_t off = parse_hex_u64(range.substr(0, comma));
            const std::uint64_t len = parse_hex_u64(range.substr(comma + 1));
            const std::string xml = riscv_target_xml();
            if (off >= xml.size())
                return "l";
            const std::string slice = xml.substr(off, len);
            return (off + slice.size() < xml.size() ? "m" : "l") + slice;
        } catch (const FramingError&) {
            return "E00";
        }
    }
    if (p == "g")
        return std::string(static_cast<std::size_t>(kRiscvRegs) * 16, '0');
    if (!p.empty() && p[0] == 'p')
        return std::string(16, '0');
    if (p == "qAttached")
        return "1";
    if (p == "k" || p.rfind("vKill", 0) == 0) {
        kill_requested_ = true;
        return "OK";
    }
    if (p == "D") {
        kill_requested_ = true;
        return "OK";
    }
    return ""; // unsupported packet, empty reply per protocol
}

ServeResult TargetSession::run_connected(TcpListener&& listener) {
    TcpStream stream = listener.accept();
    listener.close(); // single client; later connects are refused
    log_debug("target: client connected");

    RspChannel channel(std::move(stream), 0, /*ack_with_reply=*/true);
    for (;;) {
        std::string packet;
        try {
            packet = channel.recv_packet();
        } catch (const FramingError& e) {
            log_warn(std::string("target: protocol violation, closing: ") + e.what());
            break;
        } catch (const LinkError&) {
            result_.client_disconnected = !exited_;
            break;
        }
        const std::string reply = handle_packet(packet);
        channel.send_packet(reply);
        if (kill_requested_)
            break;
        if (exited_) {
            // Session is over once the exit status went out; take the
            // client's final ack (or its close) so the ack never hits a
            // reset socket, then shut down like a real stub would.
            channel.stream().set_recv_timeout_ms(200);
            try {
                char drain[8];
                (void)channel.stream().recv_some(drain, sizeof(drain));
            } catch (const LinkError&) {
            }
            break;
        }
    }
    result_.final_mtime_us = mem_.mtime_us();
    if (!exited_)
        result_.exit_code = -1;
    return std::move(result_);
}

ServeResult TargetSession::run_standalone() {
    const Outcome outcome = run_script();
    (void)outcome; // no breakpoints can exist, so the script runs to the end
    result_.final_mtime_us = mem_.mtime_us();
    return std::move(result_);
}

} // namespace

ServeResult serve(const WorkloadScript& script, const ClockSpec& clock, TcpListener&& listener,
                  const TargetLayout& layout) {
    TargetSession session(script, clock, layout);
    return session.run_connected(std::move(listener));
}

ServeResult run_standalone(const WorkloadScript& script, const ClockSpec& clock,
                           const TargetLayout& layout) {
    TargetSession session(script, clock, layout);
    return session.run_standalone();
}

// --- baseline ----------------------------------------------------------------

BaselineReport run_baseline(const WorkloadScript& script, const ClockSpec& clock,
                            SimKernel& kernel) {
    require_microsecond_timer(clock);
    validate_script(script);

    BaselineReport report;
    std::uint64_t time_us = 0;
    std::uint64_t write_index = 0;

    ScriptCursor cursor(script);
    while (auto step = cursor.next()) {
        if (const auto* c = std::get_if<ComputeStep>(&*step)) {
            time_us = checked_add(time_us, cycles_to_micros(c->cycles, clock));
            continue;
        }

        VpRequest req;
        req.timestamp = SimTime{time_us};
        if (const auto* r = std::get_if<ReadStep>(&*step)) {
            req.is_read = true;
            req.addr = r->addr;
            req.size_bytes = r->size_bytes;
        } else {
            const auto& w = std::get<WriteStep>(*step);
            req.is_read = false;
            req.addr = w.addr;
            req.size_bytes = w.size_bytes;
            req.payload = write_payload(w.seed, write_index++, w.size_bytes);
        }

        kernel.advance_to(SimTime{time_us});
        const VpResponse resp = kernel.dispatch(req);

        AccessEvent ev{req.is_read, req.addr, req.size_bytes,
                       req.is_read ? resp.payload : req.payload};
        report.trace.push_back(std::move(ev));
        report.n_accesses += 1;
        report.total_bytes += req.size_bytes;
        time_us = checked_add(time_us, resp.simulated_delay_us);
    }
    report.duration_us = time_us;
    return report;
}

} // namespace chessy
