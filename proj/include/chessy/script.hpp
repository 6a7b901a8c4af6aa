#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chessy {

struct ComputeStep {
    std::uint64_t cycles = 0;

    friend bool operator==(const ComputeStep&, const ComputeStep&) = default;
};

struct ReadStep {
    std::uint64_t addr = 0;
    std::uint64_t size_bytes = 0;

    friend bool operator==(const ReadStep&, const ReadStep&) = default;
};

struct WriteStep {
    std::uint64_t addr = 0;
    std::uint64_t size_bytes = 0;
    std::uint64_t seed = 0; // payload pattern seed

    friend bool operator==(const WriteStep&, const WriteStep&) = default;
};

struct Step;

struct LoopStep {
    std::uint64_t count = 0;
    std::vector<Step> body;

    friend bool operator==(const LoopStep&, const LoopStep&) = default;
};

struct Step {
    std::variant<ComputeStep, ReadStep, WriteStep, LoopStep> v;

    friend bool operator==(const Step&, const Step&) = default;
};

/// Ordered steps executed by the target emulator. Loops are finite and may
/// nest; transfer sizes are validated against the mailbox bound at parse
/// and construction time.
struct WorkloadScript {
    std::vector<Step> steps;

    friend bool operator==(const WorkloadScript&, const WorkloadScript&) = default;
};

/// Text form, one step per line:
///
///   compute 14000000
///   read 0x60000000 8
///   write 0x60010000 2 seed=7
///   loop 100
///     ...
///   end
///
/// '#' starts a comment; numbers accept 0x prefixes.
WorkloadScript parse_script(std::istream& in);
WorkloadScript load_script(const std::string& path);
std::string to_text(const WorkloadScript& script);

/// Throws EncodingBounds / ConfigError if any step violates its invariants.
void validate_script(const WorkloadScript& script);

/// A Read/Write step as seen by the execution engines, loops unrolled.
using PrimStep = std::variant<ComputeStep, ReadStep, WriteStep>;

/// Iterates a script without materializing loop bodies.
class ScriptCursor {
public:
    explicit ScriptCursor(const WorkloadScript& script);

    /// Next primitive step, or nullopt at end of script.
    std::optional<PrimStep> next();

private:
    struct Frame {
        const std::vector<Step>* steps;
        std::size_t index;
        std::uint64_t remaining_repeats; // for loop frames, counts after this pass
    };
    std::vector<Frame> stack_;
};

} // namespace chessy
