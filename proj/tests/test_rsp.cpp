#include <doctest.h>

#include <random>
#include <string>

#include "chessy/errors.hpp"
#include "chessy/rsp.hpp"

using namespace chessy;

namespace {

// mod-256 summer written independently of rsp::checksum; sums the bytes
// between '$' and the trailing '#xx'
unsigned independent_sum(const std::string& wire) {
    unsigned sum = 0;
    for (std::size_t i = 1; i + 3 < wire.size(); ++i)
        sum = (sum + static_cast<unsigned char>(wire[i])) % 256;
    return sum;
}

std::string random_payload(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::string p(len(rng), '\0');
    for (char& c : p)
        c = static_cast<char>(byte(rng));
    return p;
}

} // namespace

TEST_CASE("frame golden vectors") {
    // 0x6D + 0x30 + 0x2C + 0x34 = 0xFD
    CHECK(rsp::frame("m0,4") == "$m0,4#fd");
    CHECK(rsp::frame("") == "$#00");
}

TEST_CASE("parse golden vectors and failure modes") {
    CHECK(rsp::parse_frame("$m0,4#fd") == "m0,4");
    CHECK_THROWS_AS(rsp::parse_frame("$m0,4#fe"), ChecksumMismatch);
    CHECK_THROWS_AS(rsp::parse_frame("$m0,4"), FramingError);
    CHECK_THROWS_AS(rsp::parse_frame("m0,4#fd"), FramingError);
    CHECK_THROWS_AS(rsp::parse_frame("$m0,4#f"), FramingError);
    CHECK_THROWS_AS(rsp::parse_frame("$m0,4#fdX"), FramingError);
}

TEST_CASE("run-length-encoded payloads are rejected") {
    // '*' marks RLE in full RSP; this subset refuses it
    const std::string wire = rsp::frame("ab*3");
    CHECK_THROWS_AS(rsp::parse_frame(wire), FramingError);
}

TEST_CASE("escaped special bytes survive the roundtrip") {
    const std::string raw = "$#}$$##}}";
    const std::string esc = rsp::escape(raw);
    CHECK(esc.find('$') == std::string::npos);
    CHECK(esc.find('#') == std::string::npos);
    CHECK(rsp::unescape(esc) == raw);
    CHECK(rsp::parse_frame(rsp::frame(esc)) == raw);
}

TEST_CASE("frame/parse roundtrip on fuzzed payloads") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 20'000; ++i) {
        const std::string raw = random_payload(rng, 64);
        const std::string wire = rsp::frame(rsp::escape(raw));
        CHECK(rsp::parse_frame(wire) == raw);
    }
}

TEST_CASE("literal asterisks are escaped rather than rejected") {
    const std::string raw = "a*b**";
    const std::string esc = rsp::escape(raw);
    CHECK(esc.find('*') == std::string::npos);
    CHECK(rsp::parse_frame(rsp::frame(esc)) == raw);
}

TEST_CASE("emitted checksums re-validate under an independent summer") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 2000; ++i) {
        const std::string wire = rsp::frame(rsp::escape(random_payload(rng, 48)));
        const unsigned stated = static_cast<unsigned>(
            std::stoul(wire.substr(wire.size() - 2), nullptr, 16));
        CHECK(independent_sum(wire) == stated);
    }
}

TEST_CASE("dangling escape is a framing error") {
    CHECK_THROWS_AS(rsp::unescape("ab}"), FramingError);
    const std::string wire = rsp::frame("ab}"); // checksum fine, payload malformed
    CHECK_THROWS_AS(rsp::parse_frame(wire), FramingError);
}

TEST_CASE("stop replies") {
    CHECK(rsp::parse_stop_reply("S05") ==
          rsp::StopReply{rsp::StopReply::Kind::breakpoint, 5});
    CHECK(rsp::parse_stop_reply("T05swbreak:;") ==
          rsp::StopReply{rsp::StopReply::Kind::breakpoint, 5});
    CHECK(rsp::parse_stop_reply("W00") == rsp::StopReply{rsp::StopReply::Kind::exited, 0});
    CHECK(rsp::parse_stop_reply("W2a") == rsp::StopReply{rsp::StopReply::Kind::exited, 0x2A});
    CHECK_THROWS_AS(rsp::parse_stop_reply("X99"), UnknownStopReply);
    CHECK_THROWS_AS(rsp::parse_stop_reply("S5"), UnknownStopReply);
    CHECK_THROWS_AS(rsp::parse_stop_reply("S05x"), UnknownStopReply);
    CHECK_THROWS_AS(rsp::parse_stop_reply("OK"), UnknownStopReply);
}
