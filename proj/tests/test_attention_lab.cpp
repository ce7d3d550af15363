#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "ropelab/attention_lab.hpp"

using namespace ropelab;

namespace {

const RopeParams kLlama{10000.0, 128, 4096};

SchemeConfig make_config(SchemeKind kind, double scale) {
    SchemeConfig config;
    config.kind = kind;
    config.scale = scale;
    return config;
}

}  // namespace

TEST_SUITE("attention_lab") {

TEST_CASE("softmax_entropy") {
    SUBCASE("uniform logits hit the ln N bound") {
        const std::vector<double> uniform(8, 0.7);
        // ln 8
        CHECK(softmax_entropy(uniform) == doctest::Approx(2.0794415416798359).epsilon(1e-14));
    }

    SUBCASE("one-hot limit") {
        std::vector<double> logits(16, 0.0);
        logits[3] = 1000.0;
        CHECK(softmax_entropy(logits) <= 1e-6);
    }

    SUBCASE("two-point distribution") {
        const std::vector<double> logits{0.0, std::log(3.0)};
        // H(1/4, 3/4), evaluated at 50-digit precision
        CHECK(softmax_entropy(logits) == doctest::Approx(0.56233514461880835).epsilon(1e-13));
    }

    SUBCASE("single logit") {
        CHECK(softmax_entropy(std::vector<double>{42.0}) == 0.0);
    }

    SUBCASE("rejects bad input") {
        CHECK_THROWS_AS(softmax_entropy(std::vector<double>{}), std::invalid_argument);
        CHECK_THROWS_AS(softmax_entropy(std::vector<double>{1.0, std::nan("")}),
                        std::invalid_argument);
        const double inf = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(softmax_entropy(std::vector<double>{1.0, inf}), std::invalid_argument);
    }

    SUBCASE("shift invariance and range") {
        Rng rng(3);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 64);
            std::vector<double> z(n), shifted(n);
            for (double& x : z) x = rng.normal() * 4.0;
            const double c = (rng.uniform() - 0.5) * 100.0;
            for (int i = 0; i < n; ++i) shifted[i] = z[i] + c;
            const double h = softmax_entropy(z);
            CHECK(h >= 0.0);
            CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
            CHECK(std::abs(softmax_entropy(shifted) - h) < 1e-12);
        }
    }

    SUBCASE("monotone in logit gain") {
        Rng rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 2 + static_cast<int>(rng.uniform() * 32);
            std::vector<double> z(n), hot(n), hotter(n);
            for (double& x : z) x = rng.normal() * 3.0;
            const double t1 = 1.0 + rng.uniform() * 2.0;
            const double t2 = t1 + rng.uniform() * 2.0 + 1e-3;
            for (int i = 0; i < n; ++i) {
                hot[i] = t1 * z[i];
                hotter[i] = t2 * z[i];
            }
            CHECK(softmax_entropy(hotter) <= softmax_entropy(hot) + 1e-12);
        }
    }
}

TEST_CASE("temperature_equivalence_gap") {
    const FrequencyTable unscaled =
        ntk_by_parts_table(kLlama, make_config(SchemeKind::ntk_by_parts, 16.0));
    const FrequencyTable scaled = yarn_table(kLlama, make_config(SchemeKind::yarn, 16.0));
    const double temperature = scaled.mscale * scaled.mscale;

    Rng rng(13);
    std::vector<std::vector<double>> queries;
    std::vector<std::vector<double>> keys;
    std::vector<std::int64_t> q_pos;
    std::vector<std::int64_t> k_pos;
    for (int i = 0; i < 16; ++i) {
        queries.push_back(test::random_vector(rng, 128));
        q_pos.push_back(static_cast<std::int64_t>(rng.uniform() * 65536));
    }
    for (int j = 0; j < 64; ++j) {
        keys.push_back(test::random_vector(rng, 128));
        k_pos.push_back(static_cast<std::int64_t>(rng.uniform() * 65536));
    }

    SUBCASE("identity at t=1") {
        CHECK(temperature_equivalence_gap(queries, q_pos, keys, k_pos, unscaled, unscaled,
                                          1.0) == 0.0);
    }

    SUBCASE("yarn vs ntk-by-parts stays under 1e-12") {
        CHECK(temperature_equivalence_gap(queries, q_pos, keys, k_pos, scaled, unscaled,
                                          temperature) < 1e-12);
    }

    SUBCASE("single position gives two delta distributions") {
        const std::vector<std::vector<double>> one_q{queries[0]};
        const std::vector<std::vector<double>> one_k{keys[0]};
        const std::vector<std::int64_t> one_pos{17};
        CHECK(temperature_equivalence_gap(one_q, one_pos, one_k, one_pos, scaled, unscaled,
                                          temperature) == 0.0);
    }

    SUBCASE("rejects mismatched tables") {
        CHECK_THROWS_AS(temperature_equivalence_gap(queries, q_pos, keys, k_pos, scaled,
                                                    scaled, temperature),
                        std::invalid_argument);  // unscaled side has mscale != 1
        const FrequencyTable other =
            ntk_by_parts_table(kLlama, make_config(SchemeKind::ntk_by_parts, 2.0));
        CHECK_THROWS_AS(temperature_equivalence_gap(queries, q_pos, keys, k_pos, scaled,
                                                    other, temperature),
                        std::invalid_argument);  // frequencies differ
        CHECK_THROWS_AS(temperature_equivalence_gap(queries, q_pos, keys, k_pos, scaled,
                                                    unscaled, 2.0),
                        std::invalid_argument);  // t does not match mscale^2
    }
}

TEST_CASE("entropy_sweep") {
    SUBCASE("single token row has zero entropy") {
        const auto cells = entropy_sweep(kLlama, {make_config(SchemeKind::none, 1.0)},
                                         {1}, 99);
        REQUIRE(cells.size() == 1);
        CHECK(cells[0].context_length == 1);
        REQUIRE(cells[0].row_entropies.size() == 1);
        CHECK(cells[0].row_entropies[0] == 0.0);
        CHECK(cells[0].mean_entropy == 0.0);
        CHECK(cells[0].temperature == 1.0);
        CHECK(cells[0].scheme_tag == "none");
    }

    SUBCASE("deterministic given the seed") {
        const std::vector<SchemeConfig> configs{make_config(SchemeKind::yarn, 16.0)};
        const std::vector<std::int64_t> lengths{8, 32};
        const auto first = entropy_sweep(kLlama, configs, lengths, 1234);
        const auto second = entropy_sweep(kLlama, configs, lengths, 1234);
        REQUIRE(first.size() == second.size());
        for (std::size_t i = 0; i < first.size(); ++i) {
            CHECK(first[i].mean_entropy == second[i].mean_entropy);
            CHECK(first[i].row_entropies == second[i].row_entropies);
        }
        const auto reseeded = entropy_sweep(kLlama, configs, lengths, 77);
        CHECK(reseeded[0].mean_entropy != first[0].mean_entropy);
    }

    SUBCASE("yarn sharpens attention relative to ntk-by-parts") {
        const std::vector<SchemeConfig> configs{make_config(SchemeKind::ntk_by_parts, 16.0),
                                                make_config(SchemeKind::yarn, 16.0)};
        const std::vector<std::int64_t> lengths{8, 32, 128};
        const auto cells = entropy_sweep(kLlama, configs, lengths, 2024);
        REQUIRE(cells.size() == 6);
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            const AttentionDiagnostics& parts = cells[i];
            const AttentionDiagnostics& yarn = cells[i + lengths.size()];
            CHECK(yarn.temperature > 1.0);
            CHECK(yarn.mean_entropy <= parts.mean_entropy + 1e-9);
            // shared per-length seed means the rows pair off too
            for (std::size_t row = 0; row < parts.row_entropies.size(); ++row) {
                CHECK(yarn.row_entropies[row] <= parts.row_entropies[row] + 1e-9);
            }
        }
    }

    SUBCASE("entropies respect the causal ln(i+1) bound") {
        const auto cells = entropy_sweep(kLlama, {make_config(SchemeKind::pi, 8.0)},
                                         {64}, 5);
        for (std::size_t i = 0; i < cells[0].row_entropies.size(); ++i) {
            CHECK(cells[0].row_entropies[i] <=
                  std::log(static_cast<double>(i + 1)) + 1e-12);
        }
    }

    SUBCASE("dynamic sweep matches base below the trained length") {
        const auto dynamic_cells = entropy_sweep(
            kLlama, {make_config(SchemeKind::yarn, 1.0)}, {16, 64}, 31, /*dynamic=*/true);
        const auto base_cells = entropy_sweep(
            kLlama, {make_config(SchemeKind::none, 1.0)}, {16, 64}, 31);
        for (std::size_t i = 0; i < dynamic_cells.size(); ++i) {
            CHECK(dynamic_cells[i].mean_entropy == base_cells[i].mean_entropy);
        }
    }

    CHECK_THROWS_AS(entropy_sweep(kLlama, {make_config(SchemeKind::none, 1.0)}, {0}, 1),
                    std::invalid_argument);
}

TEST_CASE("expected_min_distance") {
    CHECK(expected_min_distance(2, 1.0) == 1.0 / 3.0);
    CHECK(expected_min_distance(10, 1.0) == 1.0 / 99.0);
    CHECK(expected_min_distance(10, 2.0) == 2.0 / 99.0);
    CHECK_THROWS_AS(expected_min_distance(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_min_distance(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_min_distance(4, -2.0), std::invalid_argument);
}

TEST_CASE("min_distance_monte_carlo") {
    SUBCASE("agrees with the closed form") {
        for (std::int64_t count : {2, 4, 10}) {
            const MinDistanceEstimate estimate =
                min_distance_monte_carlo(count, 1.0, 200000, 555);
            const double expected = expected_min_distance(count, 1.0);
            CHECK(std::abs(estimate.mean - expected) <= 3.0 * estimate.std_error);
            CHECK(std::abs(estimate.mean / expected - 1.0) < 0.02);
        }
    }

    SUBCASE("exactly linear in the interval length") {
        const MinDistanceEstimate unit = min_distance_monte_carlo(6, 1.0, 5000, 9);
        const MinDistanceEstimate doubled = min_distance_monte_carlo(6, 2.0, 5000, 9);
        CHECK(doubled.mean == 2.0 * unit.mean);
    }

    SUBCASE("deterministic per seed, even for one trial") {
        const MinDistanceEstimate a = min_distance_monte_carlo(5, 1.0, 1, 31337);
        const MinDistanceEstimate b = min_distance_monte_carlo(5, 1.0, 1, 31337);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == 0.0);
        const MinDistanceEstimate c = min_distance_monte_carlo(5, 1.0, 1, 31338);
        CHECK(a.mean != c.mean);
    }

    CHECK_THROWS_AS(min_distance_monte_carlo(1, 1.0, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(min_distance_monte_carlo(4, 1.0, 0, 0), std::invalid_argument);
}

}  // TEST_SUITE
