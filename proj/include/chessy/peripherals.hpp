#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chessy/kernel.hpp"
#include "chessy/sim_time.hpp"
#include "chessy/transaction.hpp"

namespace chessy {

/// Latency-annotated MMIO device model. Requests arrive with addr rebased to
/// the offset inside the device window. Owned by the kernel, single-threaded.
class Peripheral {
public:
    virtual ~Peripheral() = default;
    virtual std::string_view kind() const = 0;
    virtual VpResponse handle(const VpRequest& req, SimTime now) = 0;

    /// Printable summary of observable state, for cross-route equality checks.
    virtual std::string state_digest() const = 0;
};

/// Byte-addressable register file with fixed read/write latencies.
class RegisterFile : public Peripheral {
public:
    RegisterFile(std::uint64_t size_bytes, std::uint64_t read_latency_us,
                 std::uint64_t write_latency_us);

    std::string_view kind() const override { return "regfile"; }
    VpResponse handle(const VpRequest& req, SimTime now) override;
    std::string state_digest() const override;

    std::uint64_t size() const { return store_.size(); }
    const std::vector<std::uint8_t>& bytes() const { return store_; }

private:
    std::vector<std::uint8_t> store_;
    std::uint64_t read_latency_us_;
    std::uint64_t write_latency_us_;
};

/// Periodic sample source. Sample k exists exactly at epoch + k*period; a
/// read of samples not yet produced reports the wait as simulated delay
/// (blocking-read semantics). Sample bytes come from the seeded pattern
/// stream, so two sensors with equal seeds yield identical streams.
class EmgSensor : public Peripheral {
public:
    EmgSensor(std::uint64_t sample_period_us, std::uint64_t sample_bytes, SimTime epoch,
              std::uint64_t seed);

    std::string_view kind() const override { return "emg"; }
    VpResponse handle(const VpRequest& req, SimTime now) override;
    std::string state_digest() const override;

    std::uint64_t samples_consumed() const { return next_sample_; }
    std::uint64_t sample_bytes() const { return sample_bytes_; }

private:
    std::uint64_t period_us_;
    std::uint64_t sample_bytes_;
    SimTime epoch_;
    std::uint64_t seed_;
    std::uint64_t next_sample_ = 0;
};

/// Write-only command sink with an actuation latency. Keeps an append-only
/// log of (actuation time, payload) whose timestamps must strictly increase;
/// any latency >= 1 us guarantees that under the timer law, a zero latency
/// only tolerates one command per instant.
class RobotArm : public Peripheral {
public:
    explicit RobotArm(std::uint64_t actuation_latency_us);

    std::string_view kind() const override { return "arm"; }
    VpResponse handle(const VpRequest& req, SimTime now) override;
    std::string state_digest() const override;

    struct LogEntry {
        SimTime time;
        std::vector<std::uint8_t> payload;

        friend bool operator==(const LogEntry&, const LogEntry&) = default;
    };

    const std::vector<LogEntry>& command_log() const { return log_; }
    const std::vector<std::uint8_t>& last_command() const { return last_command_; }

    /// CSV rows `time_us,hex_payload`, one per logged command.
    void write_log_csv(std::ostream& os) const;

private:
    std::uint64_t latency_us_;
    std::vector<std::uint8_t> last_command_;
    std::vector<LogEntry> log_;
};

// --- address-map loading ----------------------------------------------------

/// One line of an address-map file: `BASE LENGTH KIND [key=value...]`.
struct MapEntry {
    std::uint64_t base = 0;
    std::uint64_t length = 0;
    std::string kind;
    std::map<std::string, std::string> params;
};

std::vector<MapEntry> parse_address_map(std::istream& in);
std::vector<MapEntry> load_address_map(const std::string& path);

/// Instantiate the device a map entry describes. Devices whose seed param is
/// absent fall back to default_seed. Unknown kinds or params raise ConfigError.
std::shared_ptr<Peripheral> make_peripheral(const MapEntry& entry, std::uint64_t default_seed);

/// Kernel with every entry mapped; the common setup path for sessions and
/// baselines.
SimKernel build_kernel(const std::vector<MapEntry>& entries, std::uint64_t default_seed,
                       BusMissPolicy policy);

} // namespace chessy
