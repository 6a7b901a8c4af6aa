#include "chessy/transaction.hpp"

#include <string>

#include "chessy/errors.hpp"

namespace chessy {

namespace {

void put_le64(std::uint8_t* out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le64(const std::uint8_t* in) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | in[i];
    return v;
}

} // namespace

std::array<std::uint8_t, kMailboxBytes> encode_transaction(const TransactionRecord& record) {
    if (record.size_bytes < kMinTransferBytes || record.size_bytes > kMaxTransferBytes)
        throw EncodingBounds("transfer size " + std::to_string(record.size_bytes) +
                             " outside 1..65536");
    std::array<std::uint8_t, kMailboxBytes> out{};
    put_le64(out.data() + 0, record.is_read ? 1 : 0);
    put_le64(out.data() + 8, record.addr);
    put_le64(out.data() + 16, record.data_ptr);
    put_le64(out.data() + 24, record.size_bytes);
    put_le64(out.data() + 32, record.timestamp.micros);
    return out;
}

TransactionRecord decode_transaction(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kMailboxBytes)
        throw MalformedMailbox("mailbox must be exactly 40 bytes, got " +
                               std::to_string(bytes.size()));
    const std::uint64_t is_read = get_le64(bytes.data() + 0);
    if (is_read > 1)
        throw MalformedMailbox("is_read field is " + std::to_string(is_read));
    TransactionRecord rec;
    rec.is_read = is_read == 1;
    rec.addr = get_le64(bytes.data() + 8);
    rec.data_ptr = get_le64(bytes.data() + 16);
    rec.size_bytes = get_le64(bytes.data() + 24);
    rec.timestamp = SimTime{get_le64(bytes.data() + 32)};
    if (rec.size_bytes < kMinTransferBytes || rec.size_bytes > kMaxTransferBytes)
        throw MalformedMailbox("transfer size " + std::to_string(rec.size_bytes) +
                               " outside 1..65536");
    return rec;
}

} // namespace chessy
