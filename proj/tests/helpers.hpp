#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "chessy/bench.hpp"
#include "chessy/peripherals.hpp"
#include "chessy/script.hpp"

namespace chessy::testing {

/// Random read/compute/write script over the devices of temponet_map():
/// EMG window reads, register-file reads/writes, arm command writes, with
/// random compute between accesses.
inline WorkloadScript random_script(std::mt19937_64& rng, int max_accesses) {
    std::uniform_int_distribution<int> n_accesses(1, max_accesses);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<std::uint64_t> cycles(0, 20'000'000);
    std::uniform_int_distribution<std::uint64_t> emg_samples(1, 8);
    std::uniform_int_distribution<std::uint64_t> reg_size(1, 64);
    std::uniform_int_distribution<std::uint64_t> arm_size(1, 8);
    std::uniform_int_distribution<std::uint64_t> seed(0, UINT64_MAX);

    WorkloadScript script;
    const int n = n_accesses(rng);
    for (int i = 0; i < n; ++i) {
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
            script.steps.push_back(Step{ComputeStep{cycles(rng)}});
        switch (pick(rng)) {
        case 0:
            script.steps.push_back(Step{ReadStep{kEmgBase, emg_samples(rng) * 2}});
            break;
        case 1: {
            const std::uint64_t size = reg_size(rng);
            std::uniform_int_distribution<std::uint64_t> offset(0, 0x1000 - size);
            script.steps.push_back(Step{ReadStep{kRegfileBase + offset(rng), size}});
            break;
        }
        case 2: {
            const std::uint64_t size = reg_size(rng);
            std::uniform_int_distribution<std::uint64_t> offset(0, 0x1000 - size);
            script.steps.push_back(
                Step{WriteStep{kRegfileBase + offset(rng), size, seed(rng)}});
            break;
        }
        default:
            script.steps.push_back(Step{WriteStep{kArmBase, arm_size(rng), seed(rng)}});
            break;
        }
    }
    return script;
}

} // namespace chessy::testing
