#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "chessy/sim_time.hpp"
#include "chessy/transaction.hpp"

namespace chessy {

/// What dispatch does with an address no peripheral claims.
enum class BusMissPolicy {
    fatal, // throw BusError
    open,  // reads return zeros, writes are dropped, zero delay
};

class Peripheral;

/// Loosely-timed discrete-event kernel: global simulated time, a scheduled
/// event queue, and address-mapped dispatch of requests to peripherals.
///
/// Single-threaded by contract; owned and driven by one control loop.
class SimKernel {
public:
    explicit SimKernel(BusMissPolicy policy = BusMissPolicy::fatal) : policy_(policy) {}

    SimTime now() const { return now_; }
    BusMissPolicy policy() const { return policy_; }

    /// Execute all events with due <= t in (due, seq) order, then set
    /// now = max(now, t). t < now is a clamp, not an error: the adapter owns
    /// time-regression policy.
    void advance_to(SimTime t);

    /// Enqueue an action at now + delta_us. Ties fire in insertion order.
    /// Throws OverflowError if the due time exceeds the 64-bit range.
    void schedule(std::uint64_t delta_us, std::function<void()> action);

    /// Map [base, base+length) to a peripheral. Ranges must not overlap.
    void map(std::uint64_t base, std::uint64_t length, std::shared_ptr<Peripheral> dev);

    /// Resolve req.addr, invoke the peripheral handler, advance time by the
    /// response's simulated_delay, and return the response.
    ///
    /// Pre: time already advanced to req.timestamp. Unmapped addresses follow
    /// the bus-miss policy.
    VpResponse dispatch(const VpRequest& req);

    std::size_t pending_events() const { return events_.size(); }

    struct Mapping {
        std::uint64_t base;
        std::uint64_t length;
        std::shared_ptr<Peripheral> dev;
    };
    const std::vector<Mapping>& mappings() const { return map_; }

    /// Peripheral mapped at exactly this base address, or nullptr.
    std::shared_ptr<Peripheral> peripheral_at(std::uint64_t base) const;

    /// One digest line per mapped device; equal digests mean equal observable
    /// peripheral state.
    std::string state_digest() const;

private:
    struct Event {
        SimTime due;
        std::uint64_t seq;
        std::function<void()> action;
    };
    // Min-heap order: earliest (due, seq) at the front.
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.due != b.due)
                return b.due < a.due;
            return b.seq < a.seq;
        }
    };

    const Mapping* find(std::uint64_t addr) const;

    SimTime now_;
    std::uint64_t next_seq_ = 0;
    std::vector<Event> events_; // heap ordered by Later
    std::vector<Mapping> map_;  // sorted by base
    BusMissPolicy policy_;
};

} // namespace chessy
