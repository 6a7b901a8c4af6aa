#pragma once

#include <string>
#include <string_view>

#include "chessy/net.hpp"

namespace chessy {

/// One end of an always-ack RSP byte stream: frames outgoing payloads,
/// extracts and acknowledges incoming ones, retransmits on '-'.
///
/// With ack_with_reply set, the '+' for a received packet rides in front of
/// the next sent packet ("+$reply#xx", the usual stub behavior) instead of
/// going out on its own, halving the packet count on the reply path.
class RspChannel {
public:
    RspChannel(TcpStream stream, int recv_timeout_ms, bool ack_with_reply = false);

    /// Escape, frame and send one packet; kept for retransmission.
    void send_packet(std::string_view raw_payload);

    /// Block until the next valid packet arrives and return its unescaped
    /// payload. Acks '+' on success, '-' on checksum failure (then waits for
    /// the retransmission). Throws LinkTimeout / LinkError / FramingError.
    std::string recv_packet();

    TcpStream& stream() { return stream_; }

private:
    bool fill();

    TcpStream stream_;
    std::string rxbuf_;
    std::string last_frame_;
    bool ack_with_reply_;
    bool ack_owed_ = false;
};

} // namespace chessy
