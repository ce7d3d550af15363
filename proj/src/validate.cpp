#include "ropelab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "ropelab/attention_lab.hpp"
#include "ropelab/dynamic.hpp"
#include "ropelab/rng.hpp"
#include "ropelab/rope_core.hpp"
#include "ropelab/schemes.hpp"
#include "ropelab/table_io.hpp"

namespace ropelab {

namespace {

struct CheckOutcome {
    bool passed = true;
    std::string detail;
};

class Collector {
public:
    void run(const std::string& name, const std::function<CheckOutcome()>& check) {
        CheckResult result;
        result.name = name;
        try {
            CheckOutcome outcome = check();
            result.passed = outcome.passed;
            result.detail = std::move(outcome.detail);
        } catch (const std::exception& e) {
            result.passed = false;
            result.detail = std::string("exception: ") + e.what();
        }
        results_.push_back(std::move(result));
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::vector<CheckResult> results_;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

std::vector<double> random_unit_vector(Rng& rng, int dim) {
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    for (double& x : v) {
        x = rng.normal();
        norm_sq += x * x;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& x : v) {
        x /= norm;
    }
    return v;
}

SchemeConfig make_config(SchemeKind kind, double scale, double alpha, double beta) {
    SchemeConfig config;
    config.kind = kind;
    config.scale = scale;
    config.alpha = alpha;
    config.beta = beta;
    return config;
}

// ntk_aware is left out at head_dim 2, where its base change is undefined;
// check_ntk_aware_endpoints verifies the rejection separately.
std::vector<SchemeConfig> all_scheme_configs(const RopeParams& params, double scale,
                                             double alpha, double beta) {
    std::vector<SchemeConfig> configs;
    for (SchemeKind kind : {SchemeKind::none, SchemeKind::pi, SchemeKind::ntk_aware,
                            SchemeKind::ntk_by_parts, SchemeKind::yarn}) {
        if (kind == SchemeKind::ntk_aware && params.head_dim == 2) {
            continue;
        }
        SchemeConfig config;
        config.kind = kind;
        config.scale = kind == SchemeKind::none ? 1.0 : scale;
        config.alpha = alpha;
        config.beta = beta;
        configs.push_back(config);
    }
    return configs;
}

CheckOutcome check_relative_position_identity(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 1));
    double worst = 0.0;
    for (int dim : {2, 8, 64, 128}) {
        RopeParams params{options.params.base, dim, options.params.trained_context};
        const FrequencyTable table = build_base_table(params);
        const std::int64_t span = 10 * params.trained_context;
        for (int trial = 0; trial < 250; ++trial) {
            PositionedPair pair;
            pair.q = random_unit_vector(rng, dim);
            pair.k = random_unit_vector(rng, dim);
            pair.m = static_cast<std::int64_t>(rng.uniform() * span);
            pair.n = static_cast<std::int64_t>(rng.uniform() * span);
            const std::int64_t room = span - std::max(pair.m, pair.n);
            const std::int64_t shift = static_cast<std::int64_t>(rng.uniform() * room);
            const double score = attention_score(pair, table);
            pair.m += shift;
            pair.n += shift;
            worst = std::max(worst, std::abs(attention_score(pair, table) - score));
        }
    }
    return {worst < 1e-9, "max score drift " + fmt(worst)};
}

CheckOutcome check_isometry(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 2));
    SchemeConfig yarn =
        make_config(SchemeKind::yarn, options.scale, options.alpha, options.beta);
    double worst = 0.0;
    for (const FrequencyTable& table :
         {build_base_table(options.params), yarn_table(options.params, yarn)}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> v(options.params.head_dim);
            double norm_sq = 0.0;
            for (double& x : v) {
                x = rng.normal();
                norm_sq += x * x;
            }
            const double position = rng.uniform() * 1e5;
            const std::vector<double> rotated = apply_rotation(v, position, table);
            double out_sq = 0.0;
            for (double x : rotated) out_sq += x * x;
            const double expected = table.mscale * std::sqrt(norm_sq);
            worst = std::max(worst, std::abs(std::sqrt(out_sq) - expected) / expected);
        }
    }
    return {worst < 1e-10, "max relative norm error " + fmt(worst)};
}

CheckOutcome check_reciprocity(const ValidationOptions& options) {
    double worst = 0.0;
    for (int d = 0; d < options.params.pair_count(); ++d) {
        const double product = wavelength(d, options.params) * theta(d, options.params);
        worst = std::max(worst, std::abs(product / (2.0 * std::numbers::pi) - 1.0));
    }
    return {worst < 1e-12, "max |lambda*theta/2pi - 1| " + fmt(worst)};
}

CheckOutcome check_monotone_spectrum(const ValidationOptions& options) {
    const FrequencyTable table = build_base_table(options.params);
    for (std::size_t d = 1; d < table.entries.size(); ++d) {
        if (!(table.entries[d].theta_base < table.entries[d - 1].theta_base)) {
            return {false, "theta not strictly decreasing at dim " + std::to_string(d)};
        }
        if (!(table.entries[d].wavelength > table.entries[d - 1].wavelength)) {
            return {false, "wavelength not strictly increasing at dim " + std::to_string(d)};
        }
    }
    return {true, std::to_string(table.entries.size()) + " pairs ordered"};
}

CheckOutcome check_composition(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 3));
    const FrequencyTable table = build_base_table(options.params);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(options.params.head_dim);
        for (double& x : v) x = rng.normal();
        const double m1 = rng.uniform() * 5e4;
        const double m2 = rng.uniform() * 5e4;
        const std::vector<double> two_step = apply_rotation(apply_rotation(v, m1, table), m2, table);
        const std::vector<double> one_step = apply_rotation(v, m1 + m2, table);
        for (std::size_t i = 0; i < v.size(); ++i) {
            worst = std::max(worst, std::abs(two_step[i] - one_step[i]));
        }
    }
    return {worst < 1e-9, "max coordinate difference " + fmt(worst)};
}

CheckOutcome check_interpolation_bound(const ValidationOptions& options) {
    const double s = options.scale;
    for (const SchemeConfig& config : all_scheme_configs(options.params, s, options.alpha, options.beta)) {
        const FrequencyTable table = build_table(options.params, config);
        for (const FrequencyEntry& entry : table.entries) {
            if (config.kind == SchemeKind::ntk_aware) {
                // Per-dim stretch grows from 1 to exactly s at the last pair.
                const double stretch = entry.theta_base / entry.theta_scaled;
                if (stretch < 1.0 - 1e-12 || stretch > config.scale * (1.0 + 1e-9)) {
                    return {false, std::string(scheme_name(config.kind)) +
                                       " stretch out of range at dim " +
                                       std::to_string(entry.dim_index)};
                }
                continue;
            }
            const double lower = entry.theta_base / config.scale;
            if (entry.theta_scaled < lower * (1.0 - 1e-12) ||
                entry.theta_scaled > entry.theta_base * (1.0 + 1e-12)) {
                return {false, std::string(scheme_name(config.kind)) +
                                   " frequency outside [theta/s, theta] at dim " +
                                   std::to_string(entry.dim_index)};
            }
        }
    }
    return {true, "all schemes bounded at s=" + fmt(s)};
}

CheckOutcome check_agreement_at_unit_scale(const ValidationOptions& options) {
    const FrequencyTable base = build_base_table(options.params);
    double worst = 0.0;
    for (SchemeConfig config : all_scheme_configs(options.params, 1.0, options.alpha, options.beta)) {
        config.scale = 1.0;
        const FrequencyTable table = build_table(options.params, config);
        worst = std::max(worst, std::abs(table.mscale - 1.0));
        for (std::size_t d = 0; d < base.entries.size(); ++d) {
            worst = std::max(worst, std::abs(table.entries[d].theta_scaled -
                                             base.entries[d].theta_scaled));
        }
    }
    return {worst < 1e-12, "max deviation from base " + fmt(worst)};
}

CheckOutcome check_ntk_aware_endpoints(const ValidationOptions& options) {
    if (options.params.head_dim == 2) {
        // The base change is singular here; rejecting is the contract.
        try {
            ntk_aware_base(options.params, options.scale);
            return {false, "head_dim 2 was not rejected"};
        } catch (const std::invalid_argument&) {
            return {true, "head_dim 2 rejected as required"};
        }
    }
    SchemeConfig config =
        make_config(SchemeKind::ntk_aware, options.scale, options.alpha, options.beta);
    const FrequencyTable table = ntk_aware_table(options.params, config);
    const FrequencyTable base = build_base_table(options.params);
    if (table.entries.front().theta_scaled != base.entries.front().theta_base) {
        return {false, "theta'_0 is not pinned to theta_0"};
    }
    const int last = options.params.pair_count() - 1;
    const double scaled_wavelength =
        2.0 * std::numbers::pi / table.entries[last].theta_scaled;
    const double target = options.scale * base.entries[last].wavelength;
    const double rel = std::abs(scaled_wavelength / target - 1.0);
    return {rel < 1e-9, "last-dim wavelength off by " + fmt(rel) + " relative"};
}

CheckOutcome check_ramp_shape(const ValidationOptions& options) {
    const double alpha = options.alpha;
    const double beta = options.beta;
    const auto ramp_under_test = [&](double r) {
        const double value = ramp(r, alpha, beta);
        return options.flip_ramp_sign ? -value : value;
    };
    double previous = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = (alpha > 0.5 ? alpha - 0.5 : 0.0) +
                         (beta - alpha + 1.0) * static_cast<double>(i) / 400.0;
        const double value = ramp_under_test(r);
        if (value < 0.0 || value > 1.0) {
            return {false, "ramp value " + fmt(value) + " outside [0,1] at r=" + fmt(r)};
        }
        if (value < previous) {
            return {false, "ramp decreasing at r=" + fmt(r)};
        }
        if (r < alpha && value != 0.0) {
            return {false, "ramp nonzero below alpha"};
        }
        if (r > beta && value != 1.0) {
            return {false, "ramp below 1 above beta"};
        }
        previous = value;
    }
    return {true, "ramp is a clamped non-decreasing ramp on [alpha, beta]"};
}

CheckOutcome check_by_parts_partition(const ValidationOptions& options) {
    SchemeConfig config =
        make_config(SchemeKind::ntk_by_parts, options.scale, options.alpha, options.beta);
    const FrequencyTable table = ntk_by_parts_table(options.params, config);
    double previous = 2.0;
    for (const FrequencyEntry& entry : table.entries) {
        if (entry.ramp_gamma > previous) {
            return {false, "gamma increases at dim " + std::to_string(entry.dim_index)};
        }
        previous = entry.ramp_gamma;
        const double rotations = rotations_at(entry.dim_index, options.params);
        if (rotations > options.beta && entry.theta_scaled != entry.theta_base) {
            return {false, "untouched block not bit-identical at dim " +
                               std::to_string(entry.dim_index)};
        }
        if (rotations < options.alpha &&
            entry.theta_scaled != entry.theta_base / options.scale) {
            return {false, "full-interpolation block not exact at dim " +
                               std::to_string(entry.dim_index)};
        }
    }
    return {true, "gamma non-increasing with exact endpoint blocks"};
}

CheckOutcome check_yarn_matches_by_parts(const ValidationOptions& options) {
    SchemeConfig parts =
        make_config(SchemeKind::ntk_by_parts, options.scale, options.alpha, options.beta);
    SchemeConfig yarn =
        make_config(SchemeKind::yarn, options.scale, options.alpha, options.beta);
    const FrequencyTable a = ntk_by_parts_table(options.params, parts);
    const FrequencyTable b = yarn_table(options.params, yarn);
    for (std::size_t d = 0; d < a.entries.size(); ++d) {
        if (a.entries[d].theta_scaled != b.entries[d].theta_scaled) {
            return {false, "frequencies differ at dim " + std::to_string(d)};
        }
    }
    const double expected = yarn_mscale(options.scale);
    if (b.mscale != expected || a.mscale != 1.0) {
        return {false, "mscale mismatch"};
    }
    return {true, "identical frequencies, mscale sqrt(t)=" + fmt(expected)};
}

CheckOutcome check_graceful_identity(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 4));
    SchemeConfig inner =
        make_config(SchemeKind::yarn, options.scale, options.alpha, options.beta);
    DynamicScaler scaler(options.params, inner);
    const FrequencyTable base = build_base_table(options.params);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t length =
            static_cast<std::int64_t>(rng.uniform() * options.params.trained_context);
        std::vector<double> raw(options.params.head_dim);
        for (double& x : raw) x = rng.normal();
        const std::int64_t position = length > 0 ? length - 1 : 0;
        const std::vector<double> dynamic_out = scaler.rotate_cached(raw, position, length);
        const std::vector<double> base_out =
            apply_rotation(raw, static_cast<double>(position), base);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            worst = std::max(worst, std::abs(dynamic_out[i] - base_out[i]));
        }
    }
    return {worst < 1e-12, "max deviation from base rotation " + fmt(worst)};
}

CheckOutcome check_monotone_scale(const ValidationOptions& options) {
    const std::int64_t trained = options.params.trained_context;
    const std::int64_t step = std::max<std::int64_t>(trained / 16, 1);
    double previous = 0.0;
    for (std::int64_t length = 0; length <= 4 * trained; length += step) {
        const double scale = dynamic_scale(length, trained);
        if (scale < previous) {
            return {false, "scale decreased at length " + std::to_string(length)};
        }
        if (length <= trained && scale != 1.0) {
            return {false, "scale differs from 1 at length " + std::to_string(length)};
        }
        previous = scale;
    }
    return {true, "non-decreasing, 1 on [0, L]"};
}

CheckOutcome check_cache_correctness(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 5));
    SchemeConfig inner =
        make_config(SchemeKind::ntk_by_parts, options.scale, options.alpha, options.beta);
    const std::int64_t trained = options.params.trained_context;
    std::vector<double> raw(options.params.head_dim);
    for (double& x : raw) x = rng.normal();

    DynamicScaler walked(options.params, inner);
    const std::int64_t step = std::max<std::int64_t>(trained / 4, 1);
    for (std::int64_t length = trained / 2; length <= 3 * trained; length += step) {
        walked.table_for_length(length);
    }
    DynamicScaler jumped(options.params, inner);

    const std::int64_t final_length = 3 * trained;
    const std::vector<double> via_walk = walked.rotate_cached(raw, 100, final_length);
    const std::vector<double> via_jump = jumped.rotate_cached(raw, 100, final_length);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (via_walk[i] != via_jump[i]) {
            return {false, "rotation depends on intermediate lengths"};
        }
    }
    return {true, "final rotation independent of visited lengths"};
}

CheckOutcome check_temperature_identity(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 6));
    SchemeConfig parts =
        make_config(SchemeKind::ntk_by_parts, options.scale, options.alpha, options.beta);
    SchemeConfig yarn =
        make_config(SchemeKind::yarn, options.scale, options.alpha, options.beta);
    const FrequencyTable unscaled = ntk_by_parts_table(options.params, parts);
    const FrequencyTable scaled = yarn_table(options.params, yarn);
    const double temperature = scaled.mscale * scaled.mscale;

    const int rows = 32;
    const int keys = 64;
    std::vector<std::vector<double>> qs(rows), ks(keys);
    std::vector<std::int64_t> q_pos(rows), k_pos(keys);
    for (int i = 0; i < rows; ++i) {
        qs[i].resize(options.params.head_dim);
        for (double& x : qs[i]) x = rng.normal();
        q_pos[i] = static_cast<std::int64_t>(rng.uniform() * 4096);
    }
    for (int j = 0; j < keys; ++j) {
        ks[j].resize(options.params.head_dim);
        for (double& x : ks[j]) x = rng.normal();
        k_pos[j] = static_cast<std::int64_t>(rng.uniform() * 4096);
    }
    const double gap =
        temperature_equivalence_gap(qs, q_pos, ks, k_pos, scaled, unscaled, temperature);
    return {gap < 1e-12, "max softmax gap " + fmt(gap)};
}

CheckOutcome check_entropy_monotonicity(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 7));
    const double temperatures[] = {1.0, 1.1, 1.2772588722239781, 1.3465735902799727};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 63);
        std::vector<double> z(n);
        for (double& x : z) x = rng.normal() * 3.0;
        std::vector<double> scaled(n);
        for (std::size_t a = 0; a + 1 < std::size(temperatures); ++a) {
            for (std::size_t b = a + 1; b < std::size(temperatures); ++b) {
                for (int i = 0; i < n; ++i) scaled[i] = temperatures[a] * z[i];
                const double h_low = softmax_entropy(scaled);
                for (int i = 0; i < n; ++i) scaled[i] = temperatures[b] * z[i];
                const double h_high = softmax_entropy(scaled);
                if (h_high > h_low + 1e-12) {
                    return {false, "entropy rose under larger logit gain"};
                }
            }
        }
    }
    return {true, "entropy non-increasing in logit gain"};
}

CheckOutcome check_shift_invariance(const ValidationOptions& options) {
    Rng rng(mix_seed(options.seed, 8));
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 64);
        std::vector<double> z(n), shifted(n);
        for (double& x : z) x = rng.normal() * 5.0;
        const double c = (rng.uniform() - 0.5) * 200.0;
        for (int i = 0; i < n; ++i) shifted[i] = z[i] + c;
        worst = std::max(worst, std::abs(softmax_entropy(shifted) - softmax_entropy(z)));
    }
    return {worst < 1e-12, "max entropy shift " + fmt(worst)};
}

CheckOutcome check_min_distance_consistency(const ValidationOptions& options) {
    for (std::int64_t count : {2, 4, 10, 32}) {
        const MinDistanceEstimate estimate = min_distance_monte_carlo(
            count, 1.0, 100000, mix_seed(options.seed, 9 + count));
        const double expected = expected_min_distance(count, 1.0);
        if (std::abs(estimate.mean - expected) > 3.0 * estimate.std_error) {
            return {false, "N=" + std::to_string(count) + " estimate " + fmt(estimate.mean) +
                               " vs expected " + fmt(expected) + " exceeds 3 sigma"};
        }
    }
    return {true, "all N within 3 sigma of L/(N^2-1)"};
}

CheckOutcome check_round_trip(const ValidationOptions& options) {
    SchemeConfig yarn =
        make_config(SchemeKind::yarn, options.scale, options.alpha, options.beta);
    const FrequencyTable table = yarn_table(options.params, yarn);

    const std::vector<io::FreqRow> rows = io::freq_rows(table);
    const std::vector<io::FreqRow> reparsed = io::parse_freqs_csv(io::freqs_csv(table));
    if (rows != reparsed) {
        return {false, "CSV round trip altered at least one value"};
    }

    const FrequencyTable from_json = io::parse_freqs_json(io::freqs_json(table));
    if (from_json.mscale != table.mscale ||
        from_json.params.base != table.params.base ||
        from_json.scheme_tag != table.scheme_tag ||
        from_json.entries.size() != table.entries.size()) {
        return {false, "JSON round trip altered table metadata"};
    }
    for (std::size_t d = 0; d < table.entries.size(); ++d) {
        if (from_json.entries[d].theta_scaled != table.entries[d].theta_scaled ||
            from_json.entries[d].theta_base != table.entries[d].theta_base ||
            from_json.entries[d].wavelength != table.entries[d].wavelength ||
            from_json.entries[d].ramp_gamma != table.entries[d].ramp_gamma) {
            return {false, "JSON round trip altered entry " + std::to_string(d)};
        }
    }
    return {true, "CSV and JSON round trips are bit-exact"};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
    options.params.validate();
    Collector collector;
    collector.run("rope_core/relative_position_identity",
                  [&] { return check_relative_position_identity(options); });
    collector.run("rope_core/isometry", [&] { return check_isometry(options); });
    collector.run("rope_core/reciprocity", [&] { return check_reciprocity(options); });
    collector.run("rope_core/monotone_spectrum",
                  [&] { return check_monotone_spectrum(options); });
    collector.run("rope_core/composition", [&] { return check_composition(options); });
    collector.run("schemes/interpolation_bound",
                  [&] { return check_interpolation_bound(options); });
    collector.run("schemes/agreement_at_unit_scale",
                  [&] { return check_agreement_at_unit_scale(options); });
    collector.run("schemes/ntk_aware_endpoints",
                  [&] { return check_ntk_aware_endpoints(options); });
    collector.run("schemes/ramp_shape", [&] { return check_ramp_shape(options); });
    collector.run("schemes/by_parts_partition",
                  [&] { return check_by_parts_partition(options); });
    collector.run("schemes/yarn_matches_by_parts",
                  [&] { return check_yarn_matches_by_parts(options); });
    collector.run("dynamic/graceful_identity",
                  [&] { return check_graceful_identity(options); });
    collector.run("dynamic/monotone_scale", [&] { return check_monotone_scale(options); });
    collector.run("dynamic/cache_correctness",
                  [&] { return check_cache_correctness(options); });
    collector.run("attention/temperature_identity",
                  [&] { return check_temperature_identity(options); });
    collector.run("attention/entropy_monotonicity",
                  [&] { return check_entropy_monotonicity(options); });
    collector.run("attention/shift_invariance",
                  [&] { return check_shift_invariance(options); });
    collector.run("attention/min_distance_consistency",
                  [&] { return check_min_distance_consistency(options); });
    collector.run("cli_io/round_trip", [&] { return check_round_trip(options); });
    return collector.take();
}

}  // namespace ropelab
