#include "chessy/peripherals.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/pattern.hpp"

namespace chessy {

namespace {

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xCBF29CE484222325ull) {
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace

// --- RegisterFile -----------------------------------------------------------

RegisterFile::RegisterFile(std::uint64_t size_bytes, std::uint64_t read_latency_us,
                           std::uint64_t write_latency_us)
    : store_(size_bytes, 0), read_latency_us_(read_latency_us),
      write_latency_us_(write_latency_us) {
    if (size_bytes == 0)
        throw ConfigError("register file size must be > 0");
}

VpResponse RegisterFile::handle(const VpRequest& req, SimTime) {
    if (req.size_bytes > store_.size() || req.addr > store_.size() - req.size_bytes)
        throw BusError(req.addr);
    VpResponse resp;
    if (req.is_read) {
        resp.payload.assign(store_.begin() + static_cast<std::ptrdiff_t>(req.addr),
                            store_.begin() + static_cast<std::ptrdiff_t>(req.addr + req.size_bytes));
        resp.simulated_delay_us = read_latency_us_;
    } else {
        std::copy(req.payload.begin(), req.payload.end(),
                  store_.begin() + static_cast<std::ptrdiff_t>(req.addr));
        resp.simulated_delay_us = write_latency_us_;
    }
    return resp;
}

std::string RegisterFile::state_digest() const {
    return "size=" + std::to_string(store_.size()) + " fnv=0x" + hex_u64(fnv1a(store_));
}

// --- EmgSensor ---------------------------------------------------------------

EmgSensor::EmgSensor(std::uint64_t sample_period_us, std::uint64_t sample_bytes, SimTime epoch,
                     std::uint64_t seed)
    : period_us_(sample_period_us), sample_bytes_(sample_bytes), epoch_(epoch), seed_(seed) {
    if (sample_bytes_ == 0)
        throw ConfigError("emg sample_bytes must be > 0");
}

VpResponse EmgSensor::handle(const VpRequest& req, SimTime now) {
    if (!req.is_read)
        throw BusError(req.addr);
    if (req.size_bytes % sample_bytes_ != 0)
        throw MalformedRequest("emg read size " + std::to_string(req.size_bytes) +
                               " is not a multiple of sample_bytes " +
                               std::to_string(sample_bytes_));
    const std::uint64_t n = req.size_bytes / sample_bytes_;
    const std::uint64_t first = next_sample_;
    const std::uint64_t last = checked_add(first, n - 1);

    // Sample k exists at epoch + k*period; the response is ready when the
    // last requested sample does.
    const SimTime available = add_micros(epoch_, checked_mul(last, period_us_));
    VpResponse resp;
    resp.simulated_delay_us = available > now ? available.micros - now.micros : 0;
    resp.payload = pattern_bytes(seed_, first * sample_bytes_, n * sample_bytes_);
    next_sample_ = last + 1;
    return resp;
}

std::string EmgSensor::state_digest() const {
    return "consumed=" + std::to_string(next_sample_);
}

// --- RobotArm ----------------------------------------------------------------

RobotArm::RobotArm(std::uint64_t actuation_latency_us) : latency_us_(actuation_latency_us) {}

VpResponse RobotArm::handle(const VpRequest& req, SimTime now) {
    if (req.is_read)
        throw BusError(req.addr);
    const SimTime actuated = add_micros(now, latency_us_);
    if (!log_.empty() && actuated <= log_.back().time)
        throw Error("arm command log time went backwards");
    last_command_ = req.payload;
    log_.push_back(LogEntry{actuated, req.payload});
    VpResponse resp;
    resp.simulated_delay_us = latency_us_;
    return resp;
}

std::string RobotArm::state_digest() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const LogEntry& e : log_) {
        std::uint8_t t[8];
        for (int i = 0; i < 8; ++i)
            t[i] = static_cast<std::uint8_t>(e.time.micros >> (8 * i));
        h = fnv1a(std::span<const std::uint8_t>(t, 8), h);
        h = fnv1a(e.payload, h);
    }
    return "commands=" + std::to_string(log_.size()) + " fnv=0x" + hex_u64(h);
}

void RobotArm::write_log_csv(std::ostream& os) const {
    os << "time_us,hex_payload\n";
    for (const LogEntry& e : log_)
        os << e.time.micros << "," << to_hex(e.payload) << "\n";
}

// --- address-map loading -------------------------------------------------

namespace {

std::uint64_t parse_u64_any(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos, 0);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' for " + what);
    }
}

std::uint64_t param_u64(const MapEntry& e, const std::string& key, std::uint64_t fallback) {
    auto it = e.params.find(key);
    if (it == e.params.end())
        return fallback;
    return parse_u64_any(it->second, key);
}

void reject_unknown_params(const MapEntry& e, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : e.params) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw ConfigError("unknown param '" + key + "' for device kind '" + e.kind + "'");
    }
}

} // namespace

std::vector<MapEntry> parse_address_map(std::istream& in) {
    std::vector<MapEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string base, length, kind;
        if (!(ls >> base))
            continue; // blank
        if (!(ls >> length >> kind))
            throw ConfigError("map line " + std::to_string(lineno) +
                              ": expected BASE LENGTH KIND [key=value...]");
        MapEntry e;
        e.base = parse_u64_any(base, "map base");
        e.length = parse_u64_any(length, "map length");
        e.kind = kind;
        std::string kv;
        while (ls >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("map line " + std::to_string(lineno) + ": bad param '" + kv +
                                  "'");
            e.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<MapEntry> load_address_map(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open address map '" + path + "'");
    return parse_address_map(in);
}

std::shared_ptr<Peripheral> make_peripheral(const MapEntry& e, std::uint64_t default_seed) {
    if (e.kind == "regfile") {
        reject_unknown_params(e, {"size", "read_latency_us", "write_latency_us"});
        return std::make_shared<RegisterFile>(param_u64(e, "size", e.length),
                                              param_u64(e, "read_latency_us", 0),
                                              param_u64(e, "write_latency_us", 0));
    }
    if (e.kind == "emg") {
        reject_unknown_params(e, {"period_us", "sample_bytes", "epoch_us", "seed"});
        return std::make_shared<EmgSensor>(param_u64(e, "period_us", 1000),
                                           param_u64(e, "sample_bytes", 2),
                                           SimTime{param_u64(e, "epoch_us", 0)},
                                           param_u64(e, "seed", default_seed));
    }
    if (e.kind == "arm") {
        reject_unknown_params(e, {"latency_us"});
        return std::make_shared<RobotArm>(param_u64(e, "latency_us", 500));
    }
    throw ConfigError("unknown device kind '" + e.kind + "'");
}

SimKernel build_kernel(const std::vector<MapEntry>& entries, std::uint64_t default_seed,
                       BusMissPolicy policy) {
    SimKernel kernel(policy);
    for (const MapEntry& e : entries)
        kernel.map(e.base, e.length, make_peripheral(e, default_seed));
    return kernel;
}

} // namespace chessy
