#include "chessy/rsp_client.hpp"

#include <algorithm>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"

namespace chessy {

namespace {

bool is_error_reply(const std::string& reply) {
    return reply.size() == 3 && reply[0] == 'E' && hex_nibble(reply[1]) >= 0 &&
           hex_nibble(reply[2]) >= 0;
}

int error_code(const std::string& reply) {
    return (hex_nibble(reply[1]) << 4) | hex_nibble(reply[2]);
}

} // namespace

RspClient::RspClient(TcpStream stream, int recv_timeout_ms)
    : channel_(std::move(stream), recv_timeout_ms) {}

RspClient RspClient::connect(const std::string& host, std::uint16_t port, int recv_timeout_ms) {
    return RspClient(TcpStream::connect(host, port), recv_timeout_ms);
}

std::string RspClient::transact(std::string_view payload) {
    channel_.send_packet(payload);
    return channel_.recv_packet();
}

void RspClient::expect_ok(const std::string& reply, const char* what) {
    if (reply == "OK")
        return;
    if (is_error_reply(reply))
        throw TargetError(error_code(reply));
    if (reply.empty())
        throw TargetError(0, std::string(what) + " not supported by target");
    throw FramingError(std::string("unexpected reply to ") + what + ": '" + reply + "'");
}

std::vector<std::uint8_t> RspClient::read_mem(std::uint64_t addr, std::uint64_t len) {
    std::vector<std::uint8_t> out;
    out.reserve(len);
    while (len > 0) {
        const std::uint64_t chunk = std::min(len, kChunkBytes);
        const std::string reply = transact("m" + hex_u64(addr) + "," + hex_u64(chunk));
        if (is_error_reply(reply))
            throw TargetError(error_code(reply));
        if (reply.size() != chunk * 2)
            throw FramingError("short memory-read reply");
        const std::vector<std::uint8_t> bytes = from_hex(reply);
        out.insert(out.end(), bytes.begin(), bytes.end());
        addr += chunk;
        len -= chunk;
    }
    return out;
}

void RspClient::write_mem(std::uint64_t addr, std::span<const std::uint8_t> data) {
    std::size_t off = 0;
    std::string cmd;
    while (off < data.size()) {
        const std::uint64_t chunk = std::min<std::uint64_t>(data.size() - off, kChunkBytes);
        cmd.clear();
        cmd.reserve(2 * chunk + 40);
        cmd.push_back('M');
        cmd += hex_u64(addr + off);
        cmd.push_back(',');
        cmd += hex_u64(chunk);
        cmd.push_back(':');
        append_hex(cmd, data.subspan(off, chunk));
        expect_ok(transact(cmd), "memory write");
        off += chunk;
    }
}

std::uint64_t RspClient::read_u64(std::uint64_t addr) {
    const std::vector<std::uint8_t> bytes = read_mem(addr, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    return v;
}

void RspClient::write_u64(std::uint64_t addr, std::uint64_t value) {
    std::uint8_t bytes[8];
    for (int i = 0; i < 8; ++i)
        bytes[i] = static_cast<std::uint8_t>(value >> (8 * i));
    write_mem(addr, bytes);
}

void RspClient::set_breakpoint(std::uint64_t addr) {
    expect_ok(transact("Z0," + hex_u64(addr) + ",4"), "breakpoint set");
}

void RspClient::clear_breakpoint(std::uint64_t addr) {
    expect_ok(transact("z0," + hex_u64(addr) + ",4"), "breakpoint clear");
}

rsp::StopReply RspClient::query_halt() {
    return rsp::parse_stop_reply(transact("?"));
}

void RspClient::send_continue() {
    channel_.send_packet("c");
}

rsp::StopReply RspClient::wait_stop() {
    return rsp::parse_stop_reply(channel_.recv_packet());
}

} // namespace chessy
