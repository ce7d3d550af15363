#pragma once

#include <string>
#include <vector>

#include "ropelab/rope_params.hpp"

namespace ropelab {

// One record per dimension pair d in [0, |D|/2).
struct FrequencyEntry {
    int dim_index = 0;
    double theta_base = 0.0;    // b^(-2d/|D|)
    double theta_scaled = 0.0;  // frequency after the scheme's transform
    double wavelength = 0.0;    // 2*pi*b^(2d/|D|), tokens per full rotation
    double ramp_gamma = 0.0;    // blend weight in [0,1]; 0 when the scheme has no ramp
};

// The single artifact all rotation code reads. Immutable after construction;
// safe to share across any number of concurrent readers.
//
// Invariants guaranteed by the builders in rope_core.hpp / schemes.hpp:
//   - exactly |D|/2 entries, dim_index = 0, 1, ..., |D|/2 - 1
//   - theta_base strictly decreasing, wavelength strictly increasing
//   - wavelength * theta_base = 2*pi per entry
//   - 0 < theta_scaled <= theta_base
//   - mscale >= 1
struct FrequencyTable {
    RopeParams params;
    std::vector<FrequencyEntry> entries;
    double mscale = 1.0;  // embedding magnitude multiplier sqrt(t); 1 unless yarn
    std::string scheme_tag = "none";
};

}  // namespace ropelab
