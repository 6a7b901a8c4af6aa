#include "chessy/rsp.hpp"

#include <cstring>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"

namespace chessy::rsp {

namespace {

bool contains(std::string_view s, char c) {
    return std::memchr(s.data(), c, s.size()) != nullptr;
}

} // namespace

std::uint8_t checksum(std::string_view payload) {
    unsigned sum = 0;
    for (char c : payload)
        sum += static_cast<std::uint8_t>(c);
    return static_cast<std::uint8_t>(sum % 256);
}

namespace {
// '$', '#' and '}' must be escaped everywhere; '*' is escaped as well so a
// literal asterisk is never mistaken for a run-length marker.
bool needs_escape(char c) {
    return c == '$' || c == '#' || c == '}' || c == '*';
}
} // namespace

bool clean_payload(std::string_view raw) {
    return !contains(raw, '$') && !contains(raw, '#') && !contains(raw, '}') &&
           !contains(raw, '*');
}

std::string escape(std::string_view raw) {
    if (clean_payload(raw))
        return std::string(raw); // hot path: command text and hex data
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (needs_escape(c)) {
            out.push_back('}');
            out.push_back(static_cast<char>(static_cast<std::uint8_t>(c) ^ 0x20));
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string unescape(std::string_view escaped) {
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        if (escaped[i] == '}') {
            if (i + 1 >= escaped.size())
                throw FramingError("dangling escape at end of payload");
            out.push_back(static_cast<char>(static_cast<std::uint8_t>(escaped[++i]) ^ 0x20));
        } else {
            out.push_back(escaped[i]);
        }
    }
    return out;
}

std::string frame(std::string_view escaped_payload) {
    std::string out;
    out.reserve(escaped_payload.size() + 4);
    out.push_back('$');
    out.append(escaped_payload);
    out.push_back('#');
    const std::uint8_t sum = checksum(escaped_payload);
    out.push_back(kHexDigits[sum >> 4]);
    out.push_back(kHexDigits[sum & 0xF]);
    return out;
}

std::string parse_frame(std::string_view wire) {
    if (wire.empty() || wire.front() != '$')
        throw FramingError("packet does not start with '$'");
    const auto hash = wire.find('#', 1);
    if (hash == std::string_view::npos || wire.size() < hash + 3)
        throw FramingError("packet missing '#' terminator or checksum");
    if (wire.size() != hash + 3)
        throw FramingError("trailing bytes after checksum");

    const std::string_view payload = wire.substr(1, hash - 1);
    const bool plain =
        !contains(payload, '$') && !contains(payload, '}') && !contains(payload, '*');
    if (!plain) {
        for (std::size_t i = 0; i < payload.size(); ++i) {
            const char c = payload[i];
            if (c == '}') {
                ++i; // escaped byte, any value allowed
                if (i >= payload.size())
                    throw FramingError("dangling escape in payload");
            } else if (c == '$') {
                throw FramingError("unescaped '$' in payload");
            } else if (c == '*') {
                throw FramingError("run-length-encoded payloads are not supported");
            }
        }
    }

    const int hi = hex_nibble(wire[hash + 1]);
    const int lo = hex_nibble(wire[hash + 2]);
    if (hi < 0 || lo < 0)
        throw FramingError("non-hex checksum digits");
    const auto stated = static_cast<std::uint8_t>((hi << 4) | lo);
    if (stated != checksum(payload))
        throw ChecksumMismatch("frame checksum mismatch");
    return plain ? std::string(payload) : unescape(payload);
}

StopReply parse_stop_reply(std::string_view payload) {
    if (payload.size() < 3)
        throw UnknownStopReply("stop reply too short: '" + std::string(payload) + "'");
    const char kind = payload[0];
    const int hi = hex_nibble(payload[1]);
    const int lo = hex_nibble(payload[2]);
    if (hi < 0 || lo < 0)
        throw UnknownStopReply("stop reply value is not hex: '" + std::string(payload) + "'");
    const int value = (hi << 4) | lo;
    switch (kind) {
    case 'S':
        if (payload.size() != 3)
            throw UnknownStopReply("S reply with trailing bytes");
        return StopReply{StopReply::Kind::breakpoint, value};
    case 'T':
        return StopReply{StopReply::Kind::breakpoint, value}; // extra pairs ignored
    case 'W':
        if (payload.size() != 3)
            throw UnknownStopReply("W reply with trailing bytes");
        return StopReply{StopReply::Kind::exited, value};
    default:
        throw UnknownStopReply("unrecognized stop reply '" + std::string(payload) + "'");
    }
}

} // namespace chessy::rsp
