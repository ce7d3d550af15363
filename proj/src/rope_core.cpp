#include "ropelab/rope_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ropelab {

void RopeParams::validate() const {
    if (head_dim < 2 || head_dim % 2 != 0) {
        throw std::invalid_argument("head_dim must be even and >= 2, got " +
                                    std::to_string(head_dim));
    }
    if (!(base > 1.0)) {
        throw std::invalid_argument("base must be > 1, got " + std::to_string(base));
    }
    if (trained_context < 1) {
        throw std::invalid_argument("trained_context must be >= 1, got " +
                                    std::to_string(trained_context));
    }
}

namespace {

void check_dim_index(int d, const RopeParams& params) {
    if (d < 0 || d >= params.pair_count()) {
        throw std::out_of_range("dimension pair index " + std::to_string(d) +
                                " outside [0, " + std::to_string(params.pair_count()) + ")");
    }
}

}  // namespace

double theta(int d, const RopeParams& params) {
    params.validate();
    check_dim_index(d, params);
    return std::pow(params.base, -2.0 * d / params.head_dim);
}

double wavelength(int d, const RopeParams& params) {
    params.validate();
    check_dim_index(d, params);
    return 2.0 * std::numbers::pi * std::pow(params.base, 2.0 * d / params.head_dim);
}

FrequencyTable build_base_table(const RopeParams& params) {
    params.validate();
    FrequencyTable table;
    table.params = params;
    table.mscale = 1.0;
    table.scheme_tag = "none";
    table.entries.reserve(params.pair_count());
    for (int d = 0; d < params.pair_count(); ++d) {
        FrequencyEntry entry;
        entry.dim_index = d;
        entry.theta_base = theta(d, params);
        entry.theta_scaled = entry.theta_base;
        entry.wavelength = wavelength(d, params);
        entry.ramp_gamma = 0.0;
        table.entries.push_back(entry);
    }
    return table;
}

std::vector<double> apply_rotation(std::span<const double> v, double position,
                                   const FrequencyTable& table) {
    const int dim = table.params.head_dim;
    if (static_cast<int>(v.size()) != dim) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                    " does not match head_dim " + std::to_string(dim));
    }
    if (position < 0.0) {
        throw std::invalid_argument("position must be non-negative");
    }
    std::vector<double> out(v.size());
    for (const FrequencyEntry& entry : table.entries) {
        // Angle as one product; incremental accumulation would drift over
        // positions in the 100k+ range.
        const double angle = position * entry.theta_scaled;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const std::size_t i = 2 * static_cast<std::size_t>(entry.dim_index);
        const double x = v[i];
        const double y = v[i + 1];
        out[i] = (x * c - y * s) * table.mscale;
        out[i + 1] = (x * s + y * c) * table.mscale;
    }
    return out;
}

double attention_score(const PositionedPair& pair, const FrequencyTable& table) {
    if (pair.m < 0 || pair.n < 0) {
        throw std::invalid_argument("positions must be non-negative");
    }
    const std::vector<double> q = apply_rotation(pair.q, static_cast<double>(pair.m), table);
    const std::vector<double> k = apply_rotation(pair.k, static_cast<double>(pair.n), table);
    double dot = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        dot += q[i] * k[i];
    }
    return dot / std::sqrt(static_cast<double>(table.params.head_dim));
}

}  // namespace ropelab
