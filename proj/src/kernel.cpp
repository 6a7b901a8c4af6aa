#include "chessy/kernel.hpp"

#include <algorithm>
#include <cassert>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/peripherals.hpp"

namespace chessy {

void SimKernel::advance_to(SimTime t) {
    while (!events_.empty() && events_.front().due <= t) {
        std::pop_heap(events_.begin(), events_.end(), Later{});
        Event ev = std::move(events_.back());
        events_.pop_back();
        now_ = std::max(now_, ev.due);
        ev.action();
    }
    now_ = std::max(now_, t);
}

void SimKernel::schedule(std::uint64_t delta_us, std::function<void()> action) {
    const SimTime due = add_micros(now_, delta_us);
    events_.push_back(Event{due, next_seq_++, std::move(action)});
    std::push_heap(events_.begin(), events_.end(), Later{});
}

void SimKernel::map(std::uint64_t base, std::uint64_t length, std::shared_ptr<Peripheral> dev) {
    if (length == 0)
        throw ConfigError("address-map range length must be > 0");
    if (!dev)
        throw ConfigError("null peripheral");
    checked_add(base, length - 1); // end must be addressable
    for (const Mapping& m : map_) {
        const bool disjoint = base + length <= m.base || m.base + m.length <= base;
        if (!disjoint)
            throw ConfigError("address-map ranges overlap at 0x" + hex_u64(base));
    }
    map_.push_back(Mapping{base, length, std::move(dev)});
    std::sort(map_.begin(), map_.end(),
              [](const Mapping& a, const Mapping& b) { return a.base < b.base; });
}

const SimKernel::Mapping* SimKernel::find(std::uint64_t addr) const {
    auto it = std::upper_bound(map_.begin(), map_.end(), addr,
                               [](std::uint64_t a, const Mapping& m) { return a < m.base; });
    if (it == map_.begin())
        return nullptr;
    --it;
    if (addr - it->base < it->length)
        return &*it;
    return nullptr;
}

std::shared_ptr<Peripheral> SimKernel::peripheral_at(std::uint64_t base) const {
    for (const Mapping& m : map_)
        if (m.base == base)
            return m.dev;
    return nullptr;
}

VpResponse SimKernel::dispatch(const VpRequest& req) {
    assert(req.timestamp == now_ && "dispatch requires time advanced to the request");
    if (req.is_read) {
        if (!req.payload.empty())
            throw MalformedRequest("read request carries a payload");
    } else if (req.payload.size() != req.size_bytes) {
        throw MalformedRequest("write payload length does not match size_bytes");
    }

    const Mapping* m = find(req.addr);
    if (m == nullptr) {
        if (policy_ == BusMissPolicy::fatal)
            throw BusError(req.addr);
        VpResponse resp;
        if (req.is_read)
            resp.payload.assign(req.size_bytes, 0);
        return resp; // open bus: zero-filled reads, dropped writes, no delay
    }

    // Accesses must not run past the end of the window.
    if (req.size_bytes > m->length || req.addr - m->base > m->length - req.size_bytes)
        throw BusError(req.addr);

    VpRequest rebased = req;
    rebased.addr = req.addr - m->base;
    VpResponse resp = m->dev->handle(rebased, now_);
    if (req.is_read && resp.payload.size() != req.size_bytes)
        throw MalformedRequest("peripheral returned wrong read length");
    advance_to(add_micros(now_, resp.simulated_delay_us));
    return resp;
}

std::string SimKernel::state_digest() const {
    std::string out;
    for (const Mapping& m : map_) {
        out += "0x" + hex_u64(m.base) + " " + std::string(m.dev->kind()) + " " +
               m.dev->state_digest() + "\n";
    }
    return out;
}

} // namespace chessy
