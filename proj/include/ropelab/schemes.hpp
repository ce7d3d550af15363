#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ropelab/frequency_table.hpp"

namespace ropelab {

enum class SchemeKind { none, pi, ntk_aware, ntk_by_parts, yarn };

// Canonical tag, e.g. "ntk-by-parts". Inverse of parse_scheme.
std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

// Which extension scheme to apply plus its hyperparameters. All five schemes
// keep the position map trivial (g(m) = m); the entire transform lives in the
// frequencies, so a single rotation kernel serves every scheme.
struct SchemeConfig {
    SchemeKind kind = SchemeKind::none;
    double scale = 1.0;  // extension ratio s = L'/L, >= 1
    double alpha = 1.0;  // ramp lower rotation threshold (ntk_by_parts/yarn)
    double beta = 32.0;  // ramp upper rotation threshold, > alpha
    std::optional<std::int64_t> target_context;  // L', must be ~ s*L when set

    // Blend ntk_by_parts/yarn in the wavelength domain,
    // lambda' = (1-gamma)*s*lambda + gamma*lambda, instead of the canonical
    // frequency-domain form. The two agree at gamma = 0 and 1 but differ
    // slightly in between; off by default.
    bool blend_wavelengths = false;

    // Throws std::invalid_argument on scale < 1, beta <= alpha, alpha < 0,
    // inconsistent target_context, or ntk_aware with head_dim == 2.
    void validate(const RopeParams& params) const;
};

// Every scheme: s = 1 reproduces the base table bit-for-bit.

// theta' = theta / s uniformly. Equivalent to compressing positions by s.
FrequencyTable pi_table(const RopeParams& params, const SchemeConfig& config);

// b' = b * s^(|D|/(|D|-2)), the base for which the last dimension's
// wavelength stretches by exactly s while theta'_0 stays 1.
// Throws std::invalid_argument when |D| == 2 (exponent singular).
double ntk_aware_base(const RopeParams& params, double scale);

// theta'_d = b'^(-2d/|D|).
FrequencyTable ntk_aware_table(const RopeParams& params, const SchemeConfig& config);

// Full rotations at pair d over the trained context: r = L / lambda_d.
double rotations_at(int d, const RopeParams& params);

// Continuous inverse of rotations_at for a given context length:
// d = |D| / (2 ln b) * ln(L / (2 pi r)). Throws on r <= 0.
double dim_for_rotations(double rotations, std::int64_t context_length,
                         const RopeParams& params);

// 0 below alpha, 1 above beta, linear in between. Throws on beta <= alpha.
double ramp(double rotations, double alpha, double beta);

// Per-pair convex blend theta'_d = (1-gamma_d)*theta_d/s + gamma_d*theta_d
// with gamma_d = ramp(rotations_at(d), alpha, beta). Pairs with r > beta are
// left bit-identical to the base; pairs with r < alpha get exactly theta/s.
FrequencyTable ntk_by_parts_table(const RopeParams& params, const SchemeConfig& config);

// sqrt(t) = 0.1 ln(s) + 1, the fitted attention magnitude multiplier.
// Exactly 1 at s = 1. Throws on s < 1.
double yarn_mscale(double scale);

// ntk_by_parts frequencies plus mscale = yarn_mscale(s); nothing else differs.
FrequencyTable yarn_table(const RopeParams& params, const SchemeConfig& config);

// Dispatch on config.kind.
FrequencyTable build_table(const RopeParams& params, const SchemeConfig& config);

}  // namespace ropelab
