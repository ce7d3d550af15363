#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ropelab/rope_core.hpp"
#include "ropelab/schemes.hpp"

namespace ropelab {

// Inference-time scale rule: s = current_length / L when that ratio exceeds 1,
// otherwise 1. Non-decreasing and continuous in current_length.
double dynamic_scale(std::int64_t current_length, std::int64_t trained_context);

// Re-parameterizes an inner scheme from the running sequence length, memoizing
// one table per distinct effective scale. Rotation must always start from
// un-rotated vectors: a key rotated under one length cannot be reused once the
// length (and with it every angle) changes, so callers cache pre-rotation
// values and call rotate_cached on demand.
//
// Single-writer: one logical owner advances the length and fills the cache.
// Concurrent readers may use tables already built.
class DynamicScaler {
public:
    // quantize_scale rounds the effective scale up to the next whole step,
    // bounding the number of distinct cached tables.
    DynamicScaler(RopeParams params, SchemeConfig inner, bool quantize_scale = false);

    double scale_for(std::int64_t current_length) const;

    // Inner scheme's table at scale_for(current_length). For lengths <= L this
    // is exactly the base (s = 1) table.
    const FrequencyTable& table_for_length(std::int64_t current_length);

    // apply_rotation of an un-rotated key at the table for current_length.
    // Independent of any intermediate lengths visited earlier.
    std::vector<double> rotate_cached(std::span<const double> raw_key,
                                      std::int64_t position,
                                      std::int64_t current_length);

    std::int64_t current_length() const { return current_length_; }
    std::size_t cached_tables() const { return cache_.size(); }
    const RopeParams& params() const { return params_; }
    const SchemeConfig& inner() const { return inner_; }

private:
    RopeParams params_;
    SchemeConfig inner_;
    bool quantize_scale_;
    std::int64_t current_length_ = 0;
    std::map<double, FrequencyTable> cache_;
};

}  // namespace ropelab
