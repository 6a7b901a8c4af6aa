#include <doctest.h>

#include <random>

#include "chessy/errors.hpp"
#include "chessy/transaction.hpp"

using namespace chessy;

TEST_CASE("encode_transaction lays out five little-endian u64 fields") {
    const TransactionRecord rec{true, 0x60000000, 0x80000100, 4, SimTime{0}};
    const auto bytes = encode_transaction(rec);

    // hand-written little-endian layout
    const std::uint8_t expected[kMailboxBytes] = {
        0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, // is_read = 1
        0x00, 0x00, 0x00, 0x60, 0x00, 0x00, 0x00, 0x00, // addr = 0x60000000
        0x00, 0x01, 0x00, 0x80, 0x00, 0x00, 0x00, 0x00, // data_ptr = 0x80000100
        0x04, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, // size = 4
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, // timestamp = 0
    };
    for (std::size_t i = 0; i < kMailboxBytes; ++i)
        CHECK(bytes[i] == expected[i]);
}

TEST_CASE("all-zero record with size 1") {
    const TransactionRecord rec{false, 0, 0, 1, SimTime{0}};
    const auto bytes = encode_transaction(rec);
    for (std::size_t i = 0; i < kMailboxBytes; ++i) {
        if (i == 24)
            CHECK(bytes[i] == 0x01);
        else
            CHECK(bytes[i] == 0x00);
    }
}

TEST_CASE("decode is the inverse of encode on random valid records") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::uint64_t> any;
    std::uniform_int_distribution<std::uint64_t> size(1, 65'536);
    for (int i = 0; i < 2000; ++i) {
        const TransactionRecord rec{(any(rng) & 1) == 1, any(rng), any(rng), size(rng),
                                    SimTime{any(rng)}};
        CHECK(decode_transaction(encode_transaction(rec)) == rec);
    }
}

TEST_CASE("decode rejects malformed mailboxes") {
    const TransactionRecord rec{true, 0x10, 0x20, 4, SimTime{7}};
    auto bytes = encode_transaction(rec);

    SUBCASE("is_read = 2") {
        bytes[0] = 0x02;
        CHECK_THROWS_AS(decode_transaction(bytes), MalformedMailbox);
    }
    SUBCASE("size_bytes = 0") {
        bytes[24] = 0x00;
        CHECK_THROWS_AS(decode_transaction(bytes), MalformedMailbox);
    }
    SUBCASE("size_bytes = 65537") {
        bytes[24] = 0x01;
        bytes[25] = 0x00;
        bytes[26] = 0x01;
        CHECK_THROWS_AS(decode_transaction(bytes), MalformedMailbox);
    }
    SUBCASE("wrong length") {
        CHECK_THROWS_AS(decode_transaction(std::span<const std::uint8_t>(bytes.data(), 39)),
                        MalformedMailbox);
    }
}

TEST_CASE("encode rejects out-of-bound sizes") {
    CHECK_THROWS_AS(encode_transaction(TransactionRecord{true, 0, 0, 0, SimTime{0}}),
                    EncodingBounds);
    CHECK_THROWS_AS(encode_transaction(TransactionRecord{true, 0, 0, 65'537, SimTime{0}}),
                    EncodingBounds);
    CHECK_NOTHROW(encode_transaction(TransactionRecord{true, 0, 0, 65'536, SimTime{0}}));
}
