#include <doctest.h>

#include <random>

#include "chessy/errors.hpp"
#include "chessy/sim_time.hpp"

using namespace chessy;

TEST_CASE("cycles_to_micros matches the 50 MHz reference points") {
    const ClockSpec clock{50'000'000, 1'000'000};
    CHECK(cycles_to_micros(14'000'000, clock) == 280'000);
    CHECK(cycles_to_micros(28'000'000, clock) == 560'000);
    CHECK(cycles_to_micros(0, clock) == 0);
}

TEST_CASE("cycles_to_micros floors") {
    const ClockSpec clock{50'000'000, 1'000'000};
    // 49 cycles at 50 MHz is 0.98 us
    CHECK(cycles_to_micros(49, clock) == 0);
    CHECK(cycles_to_micros(50, clock) == 1);
    CHECK(cycles_to_micros(99, clock) == 1);
}

TEST_CASE("cycles_to_micros is monotone in cycles") {
    const ClockSpec clock{48'000'000, 1'000'000};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> dist(0, 1ull << 50);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t a = dist(rng), b = dist(rng);
        if (a > b)
            std::swap(a, b);
        CHECK(cycles_to_micros(a, clock) <= cycles_to_micros(b, clock));
    }
}

TEST_CASE("floor rounding loses at most 1 us per addition") {
    const ClockSpec clock{47'000'001, 1'000'000}; // awkward rate on purpose
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::uint64_t> dist(0, 1ull << 40);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t a = dist(rng), b = dist(rng);
        const std::uint64_t split = cycles_to_micros(a, clock) + cycles_to_micros(b, clock);
        const std::uint64_t joint = cycles_to_micros(a + b, clock);
        CHECK(joint >= split);
        CHECK(joint <= split + 1);
    }
}

TEST_CASE("cycles_to_micros overflow is detected") {
    const ClockSpec slow{1, 1'000'000};
    CHECK_THROWS_AS(cycles_to_micros(UINT64_MAX, slow), OverflowError);
}

TEST_CASE("checked arithmetic") {
    CHECK(checked_add(2, 3) == 5);
    CHECK_THROWS_AS(checked_add(UINT64_MAX, 1), OverflowError);
    CHECK(checked_mul(1ull << 32, 1ull << 31) == (1ull << 63));
    CHECK_THROWS_AS(checked_mul(1ull << 32, 1ull << 32), OverflowError);
    CHECK(add_micros(SimTime{10}, 5).micros == 15);
    CHECK_THROWS_AS(add_micros(SimTime{UINT64_MAX}, 1), OverflowError);
}

TEST_CASE("tick conversions") {
    const ClockSpec us_timer{50'000'000, 1'000'000};
    CHECK(micros_to_ticks(1234, us_timer) == 1234); // identity at 1 MHz
    CHECK(ticks_to_micros(1234, us_timer) == 1234);

    const ClockSpec fast_timer{50'000'000, 10'000'000};
    CHECK(micros_to_ticks(7, fast_timer) == 70);
    CHECK(ticks_to_micros(70, fast_timer) == 7);

    const ClockSpec coarse{50'000'000, 32'768};
    CHECK(ticks_to_micros(32'768, coarse) == 1'000'000);
    CHECK(micros_to_ticks(1'000'000, coarse) == 32'768);
    CHECK(cycles_to_ticks(50'000'000, coarse) == 32'768); // one second of cycles
}

TEST_CASE("invalid clocks are rejected") {
    CHECK_THROWS_AS(cycles_to_micros(1, ClockSpec{0, 1'000'000}), ConfigError);
    CHECK_THROWS_AS(micros_to_ticks(1, ClockSpec{1, 0}), ConfigError);
}
