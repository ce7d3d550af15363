#include "ropelab/schemes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ropelab/rope_core.hpp"

namespace ropelab {

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::none: return "none";
        case SchemeKind::pi: return "pi";
        case SchemeKind::ntk_aware: return "ntk-aware";
        case SchemeKind::ntk_by_parts: return "ntk-by-parts";
        case SchemeKind::yarn: return "yarn";
    }
    throw std::invalid_argument("unknown scheme kind");
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    if (name == "none") return SchemeKind::none;
    if (name == "pi") return SchemeKind::pi;
    if (name == "ntk-aware") return SchemeKind::ntk_aware;
    if (name == "ntk-by-parts") return SchemeKind::ntk_by_parts;
    if (name == "yarn") return SchemeKind::yarn;
    return std::nullopt;
}

void SchemeConfig::validate(const RopeParams& params) const {
    params.validate();
    if (!(scale >= 1.0)) {
        throw std::invalid_argument("scale must be >= 1, got " + std::to_string(scale));
    }
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("alpha must be >= 0, got " + std::to_string(alpha));
    }
    if (!(beta > alpha)) {
        throw std::invalid_argument("beta must exceed alpha, got alpha=" +
                                    std::to_string(alpha) + " beta=" + std::to_string(beta));
    }
    if (kind == SchemeKind::ntk_aware && params.head_dim == 2) {
        throw std::invalid_argument("ntk-aware is undefined at head_dim 2");
    }
    if (target_context) {
        if (*target_context < 1) {
            throw std::invalid_argument("target_context must be >= 1");
        }
        const double implied = scale * static_cast<double>(params.trained_context);
        if (std::abs(static_cast<double>(*target_context) - implied) >= 1.0) {
            throw std::invalid_argument(
                "target_context " + std::to_string(*target_context) +
                " does not match scale * trained_context = " + std::to_string(implied));
        }
    }
}

namespace {

// Shared skeleton: base frequencies first, then the scheme fills in
// theta_scaled and gamma per entry.
template <typename PerDim>
FrequencyTable transform_table(const RopeParams& params, std::string tag,
                               double mscale, PerDim&& per_dim) {
    FrequencyTable table = build_base_table(params);
    table.scheme_tag = std::move(tag);
    table.mscale = mscale;
    for (FrequencyEntry& entry : table.entries) {
        per_dim(entry);
    }
    return table;
}

// (1-gamma)*theta/s + gamma*theta, with the endpoints taken verbatim so the
// gamma = 1 pairs stay bit-identical to the base and gamma = 0 pairs are an
// exact division.
double blend_frequency(double theta_base, double scale, double gamma) {
    if (scale == 1.0 || gamma >= 1.0) {
        return theta_base;
    }
    const double interpolated = theta_base / scale;
    if (gamma <= 0.0) {
        return interpolated;
    }
    return (1.0 - gamma) * interpolated + gamma * theta_base;
}

// Wavelength-domain variant: lambda' = (1-gamma)*s*lambda + gamma*lambda,
// converted back to a frequency. Not the canonical form; selected by
// SchemeConfig::blend_wavelengths.
double blend_wavelength_domain(double theta_base, double wavelength_base,
                               double scale, double gamma) {
    if (scale == 1.0 || gamma >= 1.0) {
        return theta_base;
    }
    if (gamma <= 0.0) {
        return theta_base / scale;
    }
    const double stretched = (1.0 - gamma) * scale * wavelength_base + gamma * wavelength_base;
    return 2.0 * std::numbers::pi / stretched;
}

FrequencyTable by_parts_frequencies(const RopeParams& params, const SchemeConfig& config,
                                    std::string tag, double mscale) {
    return transform_table(params, std::move(tag), mscale, [&](FrequencyEntry& entry) {
        const double rotations = rotations_at(entry.dim_index, params);
        entry.ramp_gamma = ramp(rotations, config.alpha, config.beta);
        entry.theta_scaled =
            config.blend_wavelengths
                ? blend_wavelength_domain(entry.theta_base, entry.wavelength,
                                          config.scale, entry.ramp_gamma)
                : blend_frequency(entry.theta_base, config.scale, entry.ramp_gamma);
    });
}

void require_kind(const SchemeConfig& config, SchemeKind expected) {
    if (config.kind != expected) {
        throw std::invalid_argument(std::string("config kind is ") +
                                    std::string(scheme_name(config.kind)) + ", expected " +
                                    std::string(scheme_name(expected)));
    }
}

}  // namespace

FrequencyTable pi_table(const RopeParams& params, const SchemeConfig& config) {
    require_kind(config, SchemeKind::pi);
    config.validate(params);
    return transform_table(params, "pi", 1.0, [&](FrequencyEntry& entry) {
        entry.theta_scaled = entry.theta_base / config.scale;
    });
}

double ntk_aware_base(const RopeParams& params, double scale) {
    params.validate();
    if (!(scale >= 1.0)) {
        throw std::invalid_argument("scale must be >= 1, got " + std::to_string(scale));
    }
    if (params.head_dim == 2) {
        throw std::invalid_argument("ntk-aware base change is undefined at head_dim 2");
    }
    const double exponent = static_cast<double>(params.head_dim) / (params.head_dim - 2);
    return params.base * std::pow(scale, exponent);
}

FrequencyTable ntk_aware_table(const RopeParams& params, const SchemeConfig& config) {
    require_kind(config, SchemeKind::ntk_aware);
    config.validate(params);
    const double changed_base = ntk_aware_base(params, config.scale);
    return transform_table(params, "ntk-aware", 1.0, [&](FrequencyEntry& entry) {
        entry.theta_scaled =
            std::pow(changed_base, -2.0 * entry.dim_index / params.head_dim);
    });
}

double rotations_at(int d, const RopeParams& params) {
    return static_cast<double>(params.trained_context) / wavelength(d, params);
}

double dim_for_rotations(double rotations, std::int64_t context_length,
                         const RopeParams& params) {
    params.validate();
    if (!(rotations > 0.0)) {
        throw std::invalid_argument("rotation count must be positive");
    }
    if (context_length < 1) {
        throw std::invalid_argument("context length must be >= 1");
    }
    const double ratio = static_cast<double>(context_length) /
                         (2.0 * std::numbers::pi * rotations);
    return params.head_dim / (2.0 * std::log(params.base)) * std::log(ratio);
}

double ramp(double rotations, double alpha, double beta) {
    if (!(beta > alpha)) {
        throw std::invalid_argument("beta must exceed alpha");
    }
    if (rotations < alpha) return 0.0;
    if (rotations > beta) return 1.0;
    return (rotations - alpha) / (beta - alpha);
}

FrequencyTable ntk_by_parts_table(const RopeParams& params, const SchemeConfig& config) {
    require_kind(config, SchemeKind::ntk_by_parts);
    config.validate(params);
    return by_parts_frequencies(params, config, "ntk-by-parts", 1.0);
}

double yarn_mscale(double scale) {
    if (!(scale >= 1.0)) {
        throw std::invalid_argument("scale must be >= 1, got " + std::to_string(scale));
    }
    return 0.1 * std::log(scale) + 1.0;
}

FrequencyTable yarn_table(const RopeParams& params, const SchemeConfig& config) {
    require_kind(config, SchemeKind::yarn);
    config.validate(params);
    return by_parts_frequencies(params, config, "yarn", yarn_mscale(config.scale));
}

FrequencyTable build_table(const RopeParams& params, const SchemeConfig& config) {
    switch (config.kind) {
        case SchemeKind::none: {
            config.validate(params);
            return build_base_table(params);
        }
        case SchemeKind::pi: return pi_table(params, config);
        case SchemeKind::ntk_aware: return ntk_aware_table(params, config);
        case SchemeKind::ntk_by_parts: return ntk_by_parts_table(params, config);
        case SchemeKind::yarn: return yarn_table(params, config);
    }
    throw std::invalid_argument("unknown scheme kind");
}

}  // namespace ropelab
