#pragma once

#include <vector>

namespace swarm_lssvm {

/// Per-column affine standardization: (x - mean) / std.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;

    bool operator==(const Standardizer&) const = default;
};

} // namespace swarm_lssvm
