#include <doctest.h>

#include <sstream>

#include "chessy/bench.hpp"
#include "chessy/errors.hpp"
#include "chessy/script.hpp"

using namespace chessy;

namespace {

std::vector<PrimStep> unroll(const WorkloadScript& script) {
    std::vector<PrimStep> out;
    ScriptCursor cur(script);
    while (auto s = cur.next())
        out.push_back(*s);
    return out;
}

} // namespace

TEST_CASE("scripts parse with loops, comments and hex numbers") {
    std::istringstream in("# demo\n"
                          "compute 14000000\n"
                          "loop 2\n"
                          "  read 0x60000000 8\n"
                          "  write 0x60010000 2 seed=7\n"
                          "end\n");
    const WorkloadScript script = parse_script(in);
    const auto prims = unroll(script);
    REQUIRE(prims.size() == 5);
    CHECK(std::get<ComputeStep>(prims[0]).cycles == 14'000'000);
    CHECK(std::get<ReadStep>(prims[1]).addr == 0x60000000);
    CHECK(std::get<ReadStep>(prims[1]).size_bytes == 8);
    CHECK(std::get<WriteStep>(prims[2]).seed == 7);
    CHECK(std::get<ReadStep>(prims[3]) == std::get<ReadStep>(prims[1]));
    CHECK(std::get<WriteStep>(prims[4]) == std::get<WriteStep>(prims[2]));
}

TEST_CASE("nested loops unroll in order") {
    std::istringstream in("loop 2\n"
                          "  compute 1\n"
                          "  loop 3\n"
                          "    compute 2\n"
                          "  end\n"
                          "end\n");
    const auto prims = unroll(parse_script(in));
    std::vector<std::uint64_t> cycles;
    for (const auto& p : prims)
        cycles.push_back(std::get<ComputeStep>(p).cycles);
    CHECK(cycles == std::vector<std::uint64_t>{1, 2, 2, 2, 1, 2, 2, 2});
}

TEST_CASE("loop 0 and empty bodies yield nothing") {
    std::istringstream in("loop 0\n  read 0x0 4\nend\nloop 5\nend\n");
    CHECK(unroll(parse_script(in)).empty());
}

TEST_CASE("script parse errors") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_script(in);
    };
    CHECK_THROWS_AS(parse("end\n"), ConfigError);
    CHECK_THROWS_AS(parse("loop 3\ncompute 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("poke 0x0 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("compute\n"), ConfigError);
    CHECK_THROWS_AS(parse("read 0x0\n"), ConfigError);
    CHECK_THROWS_AS(parse("read 0x0 4 5\n"), ConfigError);
    CHECK_THROWS_AS(parse("write 0x0 4 sd=1\n"), ConfigError);
    CHECK_THROWS_AS(parse("read 0x0 0\n"), EncodingBounds);
    CHECK_THROWS_AS(parse("write 0x0 65537\n"), EncodingBounds);
}

TEST_CASE("to_text output reparses to the same script") {
    std::istringstream in("compute 5\nloop 2\n  read 0x10 4\n  write 0x20 2 seed=3\nend\n");
    const WorkloadScript script = parse_script(in);
    std::istringstream round(to_text(script));
    CHECK(parse_script(round) == script);
}

TEST_CASE("generate_workload builds read-compute-write iterations") {
    const WorkloadScript script = generate_workload(4, 0, 1, 1);
    const auto prims = unroll(script);
    REQUIRE(prims.size() == 3);
    CHECK(std::holds_alternative<ReadStep>(prims[0]));
    CHECK(std::holds_alternative<ComputeStep>(prims[1]));
    CHECK(std::holds_alternative<WriteStep>(prims[2]));

    CHECK(unroll(generate_workload(4, 0, 0, 1)).empty());

    // total accesses == 2 * iterations
    const auto many = unroll(generate_workload(16, 100, 7, 1));
    int accesses = 0;
    for (const auto& p : many)
        accesses += std::holds_alternative<ComputeStep>(p) ? 0 : 1;
    CHECK(accesses == 14);

    CHECK_THROWS_AS(generate_workload(0, 0, 1, 1), EncodingBounds);
    CHECK_THROWS_AS(generate_workload(70'000, 0, 1, 1), EncodingBounds);
}

TEST_CASE("profile_workload shapes") {
    const auto prims = unroll(temponet_profile(TempoNetVariant::tns, 3, 2));
    // per iteration: emg read, compute, arm write, one aux read
    REQUIRE(prims.size() == 8);
    CHECK(std::get<ReadStep>(prims[0]).addr == kEmgBase);
    CHECK(std::get<ComputeStep>(prims[1]).cycles == kTnsCycles);
    CHECK(std::get<WriteStep>(prims[2]).addr == kArmBase);
    CHECK(std::get<ReadStep>(prims[3]).addr == kRegfileBase);

    CHECK_THROWS_AS(profile_workload(1, 1, 1, 1), ConfigError);
}
