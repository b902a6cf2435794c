#pragma once

#include <optional>
#include <string>

#include "trajroute/cost.hpp"

namespace trajroute {

// Full engine configuration. Precedence: defaults, then config file,
// then command-line flags.
struct Config {
    std::string trajectories_path;
    std::string roads_path;
    std::string snapshot_path;

    double cell_size_m = 100.0;
    // Explicit bounding box; computed from the data when absent.
    std::optional<GeoBounds> bbox;

    CostParams cost;

    std::uint64_t seed = 42;
    std::size_t query_count = 200;

    void validate() const;
};

// Merges a JSON config file over `cfg`. Unknown keys are rejected so
// typos surface immediately.
void apply_config_file(Config& cfg, const std::string& path);

}  // namespace trajroute
