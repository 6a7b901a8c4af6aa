#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chessy/errors.hpp"

namespace chessy {

inline constexpr char kHexDigits[] = "0123456789abcdef";

namespace detail {
inline constexpr std::array<char, 512> kBytePairs = [] {
    std::array<char, 512> t{};
    constexpr char digits[] = "0123456789abcdef";
    for (int b = 0; b < 256; ++b) {
        t[static_cast<std::size_t>(2 * b)] = digits[b >> 4];
        t[static_cast<std::size_t>(2 * b + 1)] = digits[b & 0xF];
    }
    return t;
}();
} // namespace detail

inline void append_hex(std::string& out, std::span<const std::uint8_t> bytes) {
    const std::size_t at = out.size();
    out.resize(at + bytes.size() * 2);
    char* dst = out.data() + at;
    for (std::uint8_t b : bytes) {
        *dst++ = detail::kBytePairs[2 * std::size_t{b}];
        *dst++ = detail::kBytePairs[2 * std::size_t{b} + 1];
    }
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
    std::string out;
    append_hex(out, bytes);
    return out;
}

namespace detail {
inline constexpr std::array<std::int8_t, 256> kNibbleTable = [] {
    std::array<std::int8_t, 256> t{};
    t.fill(-1);
    for (int i = 0; i < 10; ++i)
        t[static_cast<std::size_t>('0' + i)] = static_cast<std::int8_t>(i);
    for (int i = 0; i < 6; ++i) {
        t[static_cast<std::size_t>('a' + i)] = static_cast<std::int8_t>(10 + i);
        t[static_cast<std::size_t>('A' + i)] = static_cast<std::int8_t>(10 + i);
    }
    return t;
}();
} // namespace detail

inline int hex_nibble(char c) {
    return detail::kNibbleTable[static_cast<std::uint8_t>(c)];
}

inline std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw FramingError("odd-length hex string");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw FramingError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

/// Minimal-width lowercase hex, no 0x prefix (RSP address/length fields).
inline std::string hex_u64(std::uint64_t v) {
    if (v == 0)
        return "0";
    char buf[16];
    int i = 16;
    while (v > 0) {
        buf[--i] = kHexDigits[v & 0xF];
        v >>= 4;
    }
    return std::string(buf + i, 16 - i);
}

inline std::uint64_t parse_hex_u64(std::string_view s) {
    if (s.empty() || s.size() > 16)
        throw FramingError("bad hex number");
    std::uint64_t v = 0;
    for (char c : s) {
        const int n = hex_nibble(c);
        if (n < 0)
            throw FramingError("bad hex number");
        v = (v << 4) | static_cast<std::uint64_t>(n);
    }
    return v;
}

} // namespace chessy
