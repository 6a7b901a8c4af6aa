#include <doctest.h>

#include <functional>
#include <sstream>
#include <thread>

#include "chessy/adapter.hpp"
#include "chessy/bench.hpp"
#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/rsp_channel.hpp"
#include "chessy/target.hpp"

using namespace chessy;

namespace {

const ClockSpec kClock{50'000'000, 1'000'000};

WorkloadScript script_from(const char* text) {
    std::istringstream in(text);
    return parse_script(in);
}

/// Scripted stand-in for a target: answers each received packet through a
/// handler function. Used to force protocol errors a real emulator cannot
/// produce.
struct FakeRspServer {
    TcpListener listener;
    std::uint16_t port;
    std::thread thread;

    explicit FakeRspServer(std::function<std::string(const std::string&)> handler)
        : listener(TcpListener::bind("127.0.0.1", 0)), port(listener.port()) {
        thread = std::thread([this, handler = std::move(handler)]() mutable {
            try {
                RspChannel channel(listener.accept(), 2000);
                for (;;) {
                    const std::string packet = channel.recv_packet();
                    channel.send_packet(handler(packet));
                }
            } catch (const std::exception&) {
                // client went away; done
            }
        });
    }

    ~FakeRspServer() {
        if (thread.joinable())
            thread.join();
    }
};

std::string hex_reply(std::span<const std::uint8_t> bytes) {
    return to_hex(bytes);
}

SessionConfig fake_session_config(std::uint16_t port) {
    SessionConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = port;
    cfg.map = temponet_map();
    cfg.clock = kClock;
    cfg.link_timeout_ms = 2000;
    return cfg;
}

} // namespace

TEST_CASE("self-hosted session services accesses and enforces the timer law") {
    const WorkloadScript script = script_from("loop 2\n"
                                              "  read 0x60000000 8\n"
                                              "  compute 14000000\n"
                                              "  write 0x60010000 2 seed=7\n"
                                              "end\n");
    const SelfHostedRun run =
        run_self_hosted(script, kClock, temponet_map(), 1, /*verify_mtime=*/true);

    REQUIRE(run.session.trace.size() == 4);
    const auto& t = run.session.trace;

    // first EMG read at t=0: samples 0..3 arrive at 0..3000 us
    CHECK(t[0].record.is_read);
    CHECK(t[0].record.timestamp.micros == 0);
    CHECK(t[0].delay_us == 3000);

    // arm write after the compute burst
    CHECK_FALSE(t[1].record.is_read);
    CHECK(t[1].record.timestamp.micros == 3000 + 280'000);
    CHECK(t[1].delay_us == 500);

    // second iteration reads are already buffered
    CHECK(t[2].delay_us == 0);

    for (std::size_t i = 0; i < t.size(); ++i) {
        REQUIRE(t[i].mtime_readback_us.has_value());
        CHECK(*t[i].mtime_readback_us == t[i].record.timestamp.micros + t[i].delay_us);
        if (i > 0)
            CHECK(t[i].record.timestamp >= t[i - 1].record.timestamp);
    }

    CHECK(run.session.target_exit_code == 0);
    CHECK(run.target.traps == 4);
}

TEST_CASE("final mtime reflects timestamp + simulated_delay") {
    // EMG epoch moved to 280000 so the single read must wait 3000 us for
    // samples 0..3 (available at 280000..283000)
    MapEntry emg{kEmgBase, 0x1000, "emg",
                 {{"period_us", "1000"}, {"sample_bytes", "2"}, {"epoch_us", "280000"}}};
    const WorkloadScript script = script_from("compute 14000000\nread 0x60000000 8\n");
    const SelfHostedRun run = run_self_hosted(script, kClock, {emg}, 1);

    REQUIRE(run.session.trace.size() == 1);
    CHECK(run.session.trace[0].record.timestamp.micros == 280'000);
    CHECK(run.session.trace[0].delay_us == 3000);
    CHECK(run.target.final_mtime_us == 283'000);
    CHECK(run.session.end_time_us == 283'000);
}

TEST_CASE("back-to-back accesses chain through the written-back timer") {
    const WorkloadScript script = script_from("read 0x60000000 8\nread 0x60000000 8\n");
    const SelfHostedRun run = run_self_hosted(script, kClock, temponet_map(), 1);
    REQUIRE(run.session.trace.size() == 2);
    const auto& t = run.session.trace;
    CHECK(t[1].record.timestamp.micros == t[0].record.timestamp.micros + t[0].delay_us);
}

TEST_CASE("functional trace equals the baseline oracle") {
    const WorkloadScript script = script_from("loop 3\n"
                                              "  read 0x60000000 4\n"
                                              "  compute 1000000\n"
                                              "  write 0x60020000 16 seed=9\n"
                                              "  read 0x60020000 16\n"
                                              "  write 0x60010000 2 seed=5\n"
                                              "end\n");
    SimKernel baseline_kernel = build_kernel(temponet_map(), 3, BusMissPolicy::fatal);
    const BaselineReport baseline = run_baseline(script, kClock, baseline_kernel);

    const SelfHostedRun run = run_self_hosted(script, kClock, temponet_map(), 3);

    CHECK(run.session.functional == baseline.trace);
    CHECK(run.session.peripheral_digest == baseline_kernel.state_digest());
    // the target saw the same bytes the host serviced
    CHECK(run.target.trace == run.session.functional);
    // the regfile write really landed: read-back bytes equal written pattern
    REQUIRE(run.session.functional.size() == 12);
    CHECK(run.session.functional[2].data == run.session.functional[1].data);
}

TEST_CASE("arm commands land in the log at timestamp + latency") {
    const WorkloadScript script = script_from("compute 50\nwrite 0x60010000 2 seed=4\n");
    const SelfHostedRun run = run_self_hosted(script, kClock, temponet_map(), 1);
    REQUIRE(run.session.arm_log.size() == 1);
    CHECK(run.session.arm_log[0].time.micros == 1 + 500); // 50 cycles = 1 us, latency 500
    CHECK(run.session.arm_log[0].payload == run.session.functional[0].data);
}

TEST_CASE("zero-access scripts produce an empty trace") {
    const SelfHostedRun run =
        run_self_hosted(script_from("compute 1000\n"), kClock, temponet_map(), 1);
    CHECK(run.session.trace.empty());
    CHECK(run.session.target_exit_code == 0);
    CHECK(run.session.end_time_us == 0); // kernel never advanced
    CHECK(run.target.final_mtime_us == 20);
}

TEST_CASE("bus miss policy decides between abort and open bus") {
    const WorkloadScript script = script_from("read 0x70000000 4\n");
    SUBCASE("fatal") {
        CHECK_THROWS_AS(run_self_hosted(script, kClock, temponet_map(), 1), BusError);
    }
    SUBCASE("open") {
        const SelfHostedRun run = run_self_hosted(script, kClock, temponet_map(), 1,
                                                  false, BusMissPolicy::open);
        REQUIRE(run.session.functional.size() == 1);
        CHECK(run.session.functional[0].data == std::vector<std::uint8_t>(4, 0));
        CHECK(run.session.trace[0].delay_us == 0);
    }
}

TEST_CASE("malformed mailbox aborts the session") {
    // mailbox with is_read = 2
    auto bad_mailbox = encode_transaction(TransactionRecord{false, 0, 0, 4, SimTime{0}});
    bad_mailbox[0] = 0x02;

    FakeRspServer server([bad_mailbox](const std::string& p) -> std::string {
        if (p == "?")
            return "S05";
        if (p.rfind("Z0,", 0) == 0)
            return "OK";
        if (p == "c")
            return "T05";
        if (!p.empty() && p[0] == 'm')
            return hex_reply(bad_mailbox);
        return "";
    });

    CHECK_THROWS_AS(run_session(fake_session_config(server.port)), MalformedMailbox);
}

TEST_CASE("a timestamp behind the simulation is a time regression") {
    // first access at t=1000, second claims t=500
    const auto mk = [](std::uint64_t ts) {
        return encode_transaction(
            TransactionRecord{true, kRegfileBase, 0x80000100, 4, SimTime{ts}});
    };
    const auto first = mk(1000), second = mk(500);

    FakeRspServer server([=, n = 0](const std::string& p) mutable -> std::string {
        if (p == "?")
            return "S05";
        if (p.rfind("Z0,", 0) == 0 || (!p.empty() && p[0] == 'M'))
            return "OK";
        if (p == "c")
            return "T05";
        if (!p.empty() && p[0] == 'm')
            return hex_reply(n++ == 0 ? first : second);
        return "";
    });

    CHECK_THROWS_AS(run_session(fake_session_config(server.port)), TimeRegression);
}

TEST_CASE("garbage stop replies are rejected") {
    FakeRspServer server([](const std::string& p) -> std::string {
        if (p == "?")
            return "S05";
        if (p.rfind("Z0,", 0) == 0)
            return "OK";
        if (p == "c")
            return "XYZ";
        return "";
    });
    CHECK_THROWS_AS(run_session(fake_session_config(server.port)), UnknownStopReply);
}

TEST_CASE("target error replies surface with their code") {
    FakeRspServer server([](const std::string& p) -> std::string {
        if (p == "?")
            return "S05";
        if (p.rfind("Z0,", 0) == 0)
            return "OK";
        if (p == "c")
            return "T05";
        if (!p.empty() && p[0] == 'm')
            return "E01";
        return "";
    });
    try {
        run_session(fake_session_config(server.port));
        FAIL("expected TargetError");
    } catch (const TargetError& e) {
        CHECK(e.code == 1);
    }
}

TEST_CASE("trace csv format") {
    std::vector<AccessEntry> trace(1);
    trace[0].record = TransactionRecord{true, 0x60000000, 0x80000100, 8, SimTime{280'000}};
    trace[0].delay_us = 3000;
    trace[0].bytes_moved = 8;
    trace[0].wall_ms = 0.25;
    std::ostringstream os;
    write_trace_csv(os, trace);
    CHECK(os.str() == "idx,is_read,addr,size,timestamp_us,delay_us,wall_ms\n"
                      "0,1,0x60000000,8,280000,3000,0.250000\n");
}
