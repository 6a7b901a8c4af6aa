#pragma once

#include <compare>
#include <cstdint>

#include "chessy/errors.hpp"

namespace chessy {

/// Simulated time, microsecond resolution. Monotone within a session once
/// observed by the kernel or written to the target timer.
struct SimTime {
    std::uint64_t micros = 0;

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
};

/// Core and timer clock rates of the emulated target.
///
/// timer_hz defaults to 1 MHz so mtime ticks are microseconds and mailbox
/// timestamps need no conversion; the protocol path requires that rate.
struct ClockSpec {
    std::uint64_t fpga_clock_hz = 50'000'000;
    std::uint64_t timer_hz = 1'000'000;

    bool valid() const { return fpga_clock_hz > 0 && timer_hz > 0; }
};

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("u64 addition overflow");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("u64 multiplication overflow");
    return r;
}

inline SimTime add_micros(SimTime t, std::uint64_t delta_us) {
    return SimTime{checked_add(t.micros, delta_us)};
}

/// floor(cycles * 1e6 / fpga_clock_hz), computed through a 128-bit
/// intermediate so the product cannot overflow.
inline std::uint64_t cycles_to_micros(std::uint64_t cycles, const ClockSpec& clock) {
    if (!clock.valid())
        throw ConfigError("clock rates must be positive");
    const unsigned __int128 us =
        static_cast<unsigned __int128>(cycles) * 1'000'000u / clock.fpga_clock_hz;
    if (us > UINT64_MAX)
        throw OverflowError("cycles_to_micros result exceeds 64 bits");
    return static_cast<std::uint64_t>(us);
}

/// floor(cycles * timer_hz / fpga_clock_hz): timer ticks elapsed over a
/// cycle count. Equals cycles_to_micros at the default 1 MHz timer.
inline std::uint64_t cycles_to_ticks(std::uint64_t cycles, const ClockSpec& clock) {
    if (!clock.valid())
        throw ConfigError("clock rates must be positive");
    const unsigned __int128 ticks =
        static_cast<unsigned __int128>(cycles) * clock.timer_hz / clock.fpga_clock_hz;
    if (ticks > UINT64_MAX)
        throw OverflowError("cycles_to_ticks result exceeds 64 bits");
    return static_cast<std::uint64_t>(ticks);
}

/// floor(micros * timer_hz / 1e6): conversion path for non-microsecond
/// timer rates. Identity at 1 MHz.
inline std::uint64_t micros_to_ticks(std::uint64_t micros, const ClockSpec& clock) {
    if (!clock.valid())
        throw ConfigError("clock rates must be positive");
    const unsigned __int128 ticks =
        static_cast<unsigned __int128>(micros) * clock.timer_hz / 1'000'000u;
    if (ticks > UINT64_MAX)
        throw OverflowError("micros_to_ticks result exceeds 64 bits");
    return static_cast<std::uint64_t>(ticks);
}

inline std::uint64_t ticks_to_micros(std::uint64_t ticks, const ClockSpec& clock) {
    if (!clock.valid())
        throw ConfigError("clock rates must be positive");
    const unsigned __int128 us =
        static_cast<unsigned __int128>(ticks) * 1'000'000u / clock.timer_hz;
    if (us > UINT64_MAX)
        throw OverflowError("ticks_to_micros result exceeds 64 bits");
    return static_cast<std::uint64_t>(us);
}

} // namespace chessy
