#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace chessy::rsp {

// Remote-serial-protocol framing, always-ack subset.
//
// Wire form of a packet: '$' + payload + '#' + two lowercase hex digits of
// (sum of payload bytes mod 256). The payload must not contain an unescaped
// '$', '#' or '}'; those are sent as '}' followed by byte^0x20. The checksum
// covers the payload exactly as transmitted (after escaping). Run-length
// encoding ('*') is not part of this subset and is rejected.

std::uint8_t checksum(std::string_view payload);

/// True when raw contains none of the bytes escape() would rewrite.
bool clean_payload(std::string_view raw);

/// Escape '$', '#' and '}' so the result is a legal packet payload.
/// A literal '*' is escaped too, keeping it distinct from an RLE marker.
std::string escape(std::string_view raw);

/// Undo escape(); throws FramingError on a dangling '}'.
std::string unescape(std::string_view escaped);

/// Wrap an already-escaped payload in the wire form.
std::string frame(std::string_view escaped_payload);

/// Validate one complete wire frame and return its unescaped payload.
/// Throws FramingError on structural problems (including RLE markers) and
/// ChecksumMismatch when the trailing digits disagree with the payload.
std::string parse_frame(std::string_view wire);

/// Target run-state notification: a breakpoint stop (S/T with a signal
/// number) or process exit (W with a code).
struct StopReply {
    enum class Kind { breakpoint, exited };
    Kind kind = Kind::breakpoint;
    int value = 0; // signal for breakpoint, exit code for exited

    friend bool operator==(const StopReply&, const StopReply&) = default;
};

/// Parse an S../T../W.. stop payload; anything else throws UnknownStopReply.
StopReply parse_stop_reply(std::string_view payload);

} // namespace chessy::rsp
