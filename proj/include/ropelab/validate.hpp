#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ropelab/rope_params.hpp"

namespace ropelab {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    RopeParams params;
    double scale = 16.0;
    double alpha = 1.0;
    double beta = 32.0;
    std::uint64_t seed = 0;

    // Harness self-test: negate the ramp inside the ramp-shape check so a
    // deliberately broken property is visibly caught.
    bool flip_ramp_sign = false;
};

// Runs every module's invariant checks against the given configuration.
// A check never throws; unexpected exceptions become failures with the
// message in detail.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace ropelab
