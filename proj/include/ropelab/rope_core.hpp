#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ropelab/frequency_table.hpp"

namespace ropelab {

// A query/key vector pair with integer positions, post-projection.
struct PositionedPair {
    std::vector<double> q;
    std::vector<double> k;
    std::int64_t m = 0;
    std::int64_t n = 0;
};

// Per-pair frequency theta_d = b^(-2d/|D|). Throws std::out_of_range for
// d outside [0, |D|/2).
double theta(int d, const RopeParams& params);

// Tokens needed for a full 2*pi rotation at pair d: lambda_d = 2*pi*b^(2d/|D|).
// Equals 2*pi / theta(d, params).
double wavelength(int d, const RopeParams& params);

// Untransformed table: theta_scaled = theta_base, gamma = 0, mscale = 1.
FrequencyTable build_base_table(const RopeParams& params);

// Rotates each consecutive coordinate pair (v[2d], v[2d+1]) by the angle
// position * theta_scaled[d], then multiplies the whole vector by
// table.mscale. The position may be fractional; each angle is computed as a
// single product, never accumulated incrementally. Throws on size mismatch
// or negative position.
std::vector<double> apply_rotation(std::span<const double> v, double position,
                                   const FrequencyTable& table);

// Pre-softmax attention logit:
// <apply_rotation(q, m), apply_rotation(k, n)> / sqrt(|D|).
// Depends on (m, n) only through m - n.
double attention_score(const PositionedPair& pair, const FrequencyTable& table);

}  // namespace ropelab
