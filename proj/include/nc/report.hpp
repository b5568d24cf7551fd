#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nc {

// Structured result of one verification experiment.
struct CheckReport {
    std::string check_name;
    std::uint64_t seed = 0;
    int trials = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::vector<std::string> witnesses;  // serialized inputs for failures / extremal cases
    double runtime_ms = 0.0;
};

}  // namespace nc
