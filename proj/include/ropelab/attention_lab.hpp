#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ropelab/rope_core.hpp"
#include "ropelab/schemes.hpp"

namespace ropelab {

// Entropy measurement for one (scheme, context length) cell. Entropies are in
// nats; each row entropy lies in [0, ln(context_length)].
struct AttentionDiagnostics {
    std::vector<double> row_entropies;
    double mean_entropy = 0.0;
    double temperature = 1.0;  // t = mscale^2, the factor applied to logits
    std::int64_t context_length = 0;
    std::string scheme_tag;
};

// Shannon entropy of softmax(logits), in nats. Stable under constant shifts.
// Throws on empty or non-finite input.
double softmax_entropy(std::span<const double> logits);

// Max over rows of |softmax(row under scaled table) -
// softmax(t * row under unscaled table)|_inf. Both tables must carry identical
// frequencies, unscaled.mscale must be 1 and scaled.mscale must equal sqrt(t);
// scaling both operands by sqrt(t) multiplies every dot product by t, so the
// gap stays below 1e-12.
double temperature_equivalence_gap(const std::vector<std::vector<double>>& queries,
                                   const std::vector<std::int64_t>& query_positions,
                                   const std::vector<std::vector<double>>& keys,
                                   const std::vector<std::int64_t>& key_positions,
                                   const FrequencyTable& scaled,
                                   const FrequencyTable& unscaled,
                                   double temperature);

// Causal self-attention entropies on synthetic data: for each context length,
// q/k rows are drawn standard normal from a seed shared across all configs
// (so schemes are compared on identical data), rotated per scheme, and row i
// is softmaxed over positions 0..i. Output order: configs outer, lengths
// inner. Deterministic given the seed.
//
// When dynamic is set, each cell's table comes from re-parameterizing the
// config at that context length instead of the config's fixed scale.
std::vector<AttentionDiagnostics> entropy_sweep(const RopeParams& params,
                                                const std::vector<SchemeConfig>& configs,
                                                const std::vector<std::int64_t>& context_lengths,
                                                std::uint64_t seed,
                                                bool dynamic = false);

// Mean minimum pairwise distance among count uniform points on [0, length]:
// length / (count^2 - 1). Throws on count < 2 or length <= 0.
double expected_min_distance(std::int64_t count, double length);

struct MinDistanceEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo check of expected_min_distance: per trial, drop count uniform
// points, sort, take the smallest adjacent gap; returns the mean and its
// standard error. Deterministic per seed; exactly linear in length.
MinDistanceEstimate min_distance_monte_carlo(std::int64_t count, double length,
                                             std::int64_t trials, std::uint64_t seed);

}  // namespace ropelab
