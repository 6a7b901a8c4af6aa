#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chessy/rsp.hpp"
#include "chessy/rsp_channel.hpp"

namespace chessy {

/// Debugger-side RSP client: breakpoints, run control, and memory access
/// (the dump/restore data path). One client per connection; the adapter
/// serializes all use.
class RspClient {
public:
    RspClient(TcpStream stream, int recv_timeout_ms);
    static RspClient connect(const std::string& host, std::uint16_t port, int recv_timeout_ms);

    /// Memory transfers above this size go over the wire in multiple packets.
    static constexpr std::uint64_t kChunkBytes = 4096;

    /// 'm': read target memory, chunked and reassembled. len 0 is a no-op.
    std::vector<std::uint8_t> read_mem(std::uint64_t addr, std::uint64_t len);

    /// 'M': write target memory, chunked. Empty data is a no-op.
    void write_mem(std::uint64_t addr, std::span<const std::uint8_t> data);

    std::uint64_t read_u64(std::uint64_t addr);
    void write_u64(std::uint64_t addr, std::uint64_t value);

    /// 'Z0'/'z0' with kind 4. Setting an existing breakpoint is idempotent.
    void set_breakpoint(std::uint64_t addr);
    void clear_breakpoint(std::uint64_t addr);

    rsp::StopReply query_halt(); // '?'

    void send_continue(); // 'c'
    rsp::StopReply wait_stop();
    rsp::StopReply resume() {
        send_continue();
        return wait_stop();
    }

    /// Raw packet access for protocol experiments and tests.
    RspChannel& channel() { return channel_; }

private:
    std::string transact(std::string_view payload);
    static void expect_ok(const std::string& reply, const char* what);

    RspChannel channel_;
};

} // namespace chessy
