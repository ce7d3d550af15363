#include "ropelab/dynamic.hpp"

#include <cmath>
#include <stdexcept>

namespace ropelab {

double dynamic_scale(std::int64_t current_length, std::int64_t trained_context) {
    if (trained_context < 1) {
        throw std::invalid_argument("trained_context must be >= 1");
    }
    if (current_length < 0) {
        throw std::invalid_argument("current_length must be non-negative");
    }
    const double ratio = static_cast<double>(current_length) /
                         static_cast<double>(trained_context);
    return ratio > 1.0 ? ratio : 1.0;
}

DynamicScaler::DynamicScaler(RopeParams params, SchemeConfig inner, bool quantize_scale)
    : params_(params), inner_(inner), quantize_scale_(quantize_scale) {
    inner_.validate(params_);
    // The effective scale replaces whatever the inner config carried, so a
    // target_context pinned to the old scale would no longer be consistent.
    inner_.target_context.reset();
}

double DynamicScaler::scale_for(std::int64_t current_length) const {
    const double scale = dynamic_scale(current_length, params_.trained_context);
    return quantize_scale_ ? std::ceil(scale) : scale;
}

const FrequencyTable& DynamicScaler::table_for_length(std::int64_t current_length) {
    if (current_length > current_length_) {
        current_length_ = current_length;
    }
    const double scale = scale_for(current_length);
    auto it = cache_.find(scale);
    if (it == cache_.end()) {
        SchemeConfig config = inner_;
        config.scale = scale;
        it = cache_.emplace(scale, build_table(params_, config)).first;
    }
    return it->second;
}

std::vector<double> DynamicScaler::rotate_cached(std::span<const double> raw_key,
                                                 std::int64_t position,
                                                 std::int64_t current_length) {
    return apply_rotation(raw_key, static_cast<double>(position),
                          table_for_length(current_length));
}

}  // namespace ropelab
