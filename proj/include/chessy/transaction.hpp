#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chessy/sim_time.hpp"

namespace chessy {

/// The mailbox record the target writes before each peripheral access.
///
/// Encoded form is five little-endian 64-bit fields, 40 bytes total:
///
///   offset  0: is_read (0 or 1, widened to 64 bits)
///   offset  8: addr          target-bus address of the access
///   offset 16: data_ptr      target-memory address of the payload buffer
///   offset 24: size_bytes    1..65536
///   offset 32: timestamp_us  mtime at the moment of the request
struct TransactionRecord {
    bool is_read = false;
    std::uint64_t addr = 0;
    std::uint64_t data_ptr = 0;
    std::uint64_t size_bytes = 0;
    SimTime timestamp;

    friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

inline constexpr std::size_t kMailboxBytes = 40;
inline constexpr std::uint64_t kMinTransferBytes = 1;
inline constexpr std::uint64_t kMaxTransferBytes = 65'536;

/// Serialize a record into the 40-byte mailbox layout.
/// Throws EncodingBounds if size_bytes is outside 1..65536.
std::array<std::uint8_t, kMailboxBytes> encode_transaction(const TransactionRecord& record);

/// Inverse of encode_transaction. Throws MalformedMailbox if the is_read
/// field is not 0/1 or size_bytes violates its bound.
TransactionRecord decode_transaction(std::span<const std::uint8_t> bytes);

/// Host-side request to a simulated peripheral.
struct VpRequest {
    bool is_read = false;
    std::uint64_t addr = 0;
    std::vector<std::uint8_t> payload; // write data; empty for reads
    std::uint64_t size_bytes = 0;
    SimTime timestamp;
};

/// Peripheral response: read data plus the latency the device models.
struct VpResponse {
    std::vector<std::uint8_t> payload; // read data; empty for writes
    std::uint64_t simulated_delay_us = 0;
};

/// One functional access as observed by either execution route: the bytes a
/// read returned or a write carried. Equality across routes is the system's
/// core correctness check.
struct AccessEvent {
    bool is_read = false;
    std::uint64_t addr = 0;
    std::uint64_t size_bytes = 0;
    std::vector<std::uint8_t> data;

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

using FunctionalTrace = std::vector<AccessEvent>;

} // namespace chessy
