#include "ropelab/attention_lab.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "ropelab/dynamic.hpp"
#include "ropelab/rng.hpp"

namespace ropelab {

namespace {

std::vector<double> softmax(std::span<const double> logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - peak);
        sum += probs[i];
    }
    for (double& p : probs) {
        p /= sum;
    }
    return probs;
}

double dot_over_sqrt_dim(const std::vector<double>& a, const std::vector<double>& b,
                         int head_dim) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return dot / std::sqrt(static_cast<double>(head_dim));
}

}  // namespace

double softmax_entropy(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax_entropy: empty logits");
    }
    for (double z : logits) {
        if (!std::isfinite(z)) {
            throw std::invalid_argument("softmax_entropy: non-finite logit");
        }
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    // H = ln(S) - sum(u*e^u)/S over shifted logits u = z - max; underflowed
    // terms drop out instead of producing 0*log(0).
    double sum = 0.0;
    double weighted = 0.0;
    for (double z : logits) {
        const double u = z - peak;
        const double e = std::exp(u);
        sum += e;
        weighted += u * e;
    }
    const double entropy = std::log(sum) - weighted / sum;
    return entropy > 0.0 ? entropy : 0.0;
}

double temperature_equivalence_gap(const std::vector<std::vector<double>>& queries,
                                   const std::vector<std::int64_t>& query_positions,
                                   const std::vector<std::vector<double>>& keys,
                                   const std::vector<std::int64_t>& key_positions,
                                   const FrequencyTable& scaled,
                                   const FrequencyTable& unscaled,
                                   double temperature) {
    if (queries.size() != query_positions.size() || keys.size() != key_positions.size()) {
        throw std::invalid_argument("positions must pair one-to-one with vectors");
    }
    if (queries.empty() || keys.empty()) {
        throw std::invalid_argument("need at least one query row and one key");
    }
    if (scaled.params.head_dim != unscaled.params.head_dim ||
        scaled.entries.size() != unscaled.entries.size()) {
        throw std::invalid_argument("mismatched tables");
    }
    for (std::size_t d = 0; d < scaled.entries.size(); ++d) {
        if (scaled.entries[d].theta_scaled != unscaled.entries[d].theta_scaled) {
            throw std::invalid_argument("tables disagree on frequencies at dim " +
                                        std::to_string(d));
        }
    }
    if (unscaled.mscale != 1.0) {
        throw std::invalid_argument("unscaled table must have mscale 1");
    }
    const double root_t = std::sqrt(temperature);
    if (std::abs(scaled.mscale - root_t) > 1e-12 * root_t) {
        throw std::invalid_argument("scaled table mscale does not equal sqrt(temperature)");
    }

    const int head_dim = scaled.params.head_dim;
    std::vector<std::vector<double>> keys_scaled;
    std::vector<std::vector<double>> keys_plain;
    keys_scaled.reserve(keys.size());
    keys_plain.reserve(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
        const double pos = static_cast<double>(key_positions[j]);
        keys_scaled.push_back(apply_rotation(keys[j], pos, scaled));
        keys_plain.push_back(apply_rotation(keys[j], pos, unscaled));
    }

    double gap = 0.0;
    std::vector<double> row_scaled(keys.size());
    std::vector<double> row_plain(keys.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double pos = static_cast<double>(query_positions[i]);
        const std::vector<double> q_scaled = apply_rotation(queries[i], pos, scaled);
        const std::vector<double> q_plain = apply_rotation(queries[i], pos, unscaled);
        for (std::size_t j = 0; j < keys.size(); ++j) {
            row_scaled[j] = dot_over_sqrt_dim(q_scaled, keys_scaled[j], head_dim);
            row_plain[j] = temperature * dot_over_sqrt_dim(q_plain, keys_plain[j], head_dim);
        }
        const std::vector<double> p_scaled = softmax(row_scaled);
        const std::vector<double> p_plain = softmax(row_plain);
        for (std::size_t j = 0; j < keys.size(); ++j) {
            gap = std::max(gap, std::abs(p_scaled[j] - p_plain[j]));
        }
    }
    return gap;
}

std::vector<AttentionDiagnostics> entropy_sweep(const RopeParams& params,
                                                const std::vector<SchemeConfig>& configs,
                                                const std::vector<std::int64_t>& context_lengths,
                                                std::uint64_t seed,
                                                bool dynamic) {
    params.validate();
    for (std::int64_t length : context_lengths) {
        if (length < 1) {
            throw std::invalid_argument("context lengths must be >= 1");
        }
    }

    std::vector<AttentionDiagnostics> results;
    results.reserve(configs.size() * context_lengths.size());
    for (const SchemeConfig& config : configs) {
        std::optional<DynamicScaler> scaler;
        std::optional<FrequencyTable> fixed;
        if (dynamic) {
            scaler.emplace(params, config);
        } else {
            fixed = build_table(params, config);
        }
        for (std::int64_t length : context_lengths) {
            const FrequencyTable& table =
                dynamic ? scaler->table_for_length(length) : *fixed;

            // Same per-length seed for every config: schemes see identical
            // synthetic q/k and the diagnostics compare like with like.
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(length)));
            std::vector<std::vector<double>> rotated_q(length);
            std::vector<std::vector<double>> rotated_k(length);
            std::vector<double> raw(params.head_dim);
            for (std::int64_t i = 0; i < length; ++i) {
                for (double& x : raw) x = rng.normal();
                rotated_q[i] = apply_rotation(raw, static_cast<double>(i), table);
                for (double& x : raw) x = rng.normal();
                rotated_k[i] = apply_rotation(raw, static_cast<double>(i), table);
            }

            AttentionDiagnostics cell;
            cell.context_length = length;
            cell.scheme_tag = table.scheme_tag;
            cell.temperature = table.mscale * table.mscale;
            cell.row_entropies.reserve(length);
            std::vector<double> logits;
            logits.reserve(length);
            double total = 0.0;
            for (std::int64_t i = 0; i < length; ++i) {
                logits.clear();
                for (std::int64_t j = 0; j <= i; ++j) {  // causal support
                    logits.push_back(
                        dot_over_sqrt_dim(rotated_q[i], rotated_k[j], params.head_dim));
                }
                const double h = softmax_entropy(logits);
                cell.row_entropies.push_back(h);
                total += h;
            }
            cell.mean_entropy = total / static_cast<double>(length);
            results.push_back(std::move(cell));
        }
    }
    return results;
}

double expected_min_distance(std::int64_t count, double length) {
    if (count < 2) {
        throw std::invalid_argument("need at least 2 points");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("length must be positive and finite");
    }
    const double n = static_cast<double>(count);
    return length / (n * n - 1.0);
}

MinDistanceEstimate min_distance_monte_carlo(std::int64_t count, double length,
                                             std::int64_t trials, std::uint64_t seed) {
    if (count < 2) {
        throw std::invalid_argument("need at least 2 points");
    }
    if (trials < 1) {
        throw std::invalid_argument("need at least 1 trial");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("length must be positive and finite");
    }

    // Sample on the unit interval and rescale at the end; the estimate is then
    // exactly linear in length.
    Rng rng(seed);
    std::vector<double> points(count);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (double& p : points) {
            p = rng.uniform();
        }
        std::sort(points.begin(), points.end());
        double min_gap = points[1] - points[0];
        for (std::int64_t i = 2; i < count; ++i) {
            min_gap = std::min(min_gap, points[i] - points[i - 1]);
        }
        sum += min_gap;
        sum_sq += min_gap * min_gap;
    }

    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    MinDistanceEstimate estimate;
    estimate.mean = mean * length;
    if (trials > 1) {
        const double variance = (sum_sq - n * mean * mean) / (n - 1.0);
        estimate.std_error = std::sqrt(std::max(variance, 0.0) / n) * length;
    }
    return estimate;
}

}  // namespace ropelab
