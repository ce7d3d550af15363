#pragma once

#include <cstdint>

namespace ropelab {

// Pre-training facts every extension scheme consumes: the frequency base b,
// the per-head dimension |D| and the trained context length L.
struct RopeParams {
    double base = 10000.0;
    int head_dim = 128;
    std::int64_t trained_context = 4096;

    int pair_count() const { return head_dim / 2; }

    // Throws std::invalid_argument on: odd or < 2 head_dim, base <= 1,
    // trained_context < 1.
    void validate() const;
};

}  // namespace ropelab
