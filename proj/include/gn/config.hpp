#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gn/embed.hpp"
#include "gn/kernel.hpp"

namespace gn {

inline constexpr const char* kVersion = "0.1.0";

// Everything needed to reproduce an experiment: kernel, mode, stopping
// rule, checkpoints, ensemble size and master seed. Serializes to and from
// JSON round-trip exactly.
struct RunConfig {
    Kernel kernel = Kernel::power(2.0);
    bool embedded = false;
    StopRule stop = StopRule::at_births(1000);
    std::vector<std::uint64_t> checkpoints;
    std::uint32_t k_max = 4;
    std::uint32_t shape_cap = 2;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 1;
    bool trace_births = false;  // embedded mode: write per-trial birth-time CSVs
    std::string out_dir;

    void validate() const;  // throws on malformed configs

    std::string to_json_string() const;
    static RunConfig from_json_string(const std::string& text);
    static RunConfig load(const std::string& path);
    void save(const std::string& path) const;
};

std::string kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const std::string& text);

}  // namespace gn
