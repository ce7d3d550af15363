#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "ropelab/rope_core.hpp"

using namespace ropelab;

namespace {
constexpr double kPi = std::numbers::pi;
const RopeParams kLlama{10000.0, 128, 4096};
}  // namespace

TEST_SUITE("rope_core") {

TEST_CASE("theta closed form") {
    CHECK(theta(0, kLlama) == 1.0);
    // 10000^(-1/2)
    CHECK(theta(32, kLlama) == doctest::Approx(0.01).epsilon(1e-15));
    // 10000^(-126/128), evaluated at 50-digit precision
    CHECK(theta(63, kLlama) == doctest::Approx(1.1547819846894582e-4).epsilon(1e-13));

    CHECK_THROWS_AS(theta(-1, kLlama), std::out_of_range);
    CHECK_THROWS_AS(theta(64, kLlama), std::out_of_range);
}

TEST_CASE("wavelength closed form and reciprocity") {
    CHECK(wavelength(0, kLlama) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(wavelength(0, RopeParams{123.0, 8, 100}) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(wavelength(32, kLlama) == doctest::Approx(200.0 * kPi).epsilon(1e-14));
    // 2*pi*10000^(126/128), evaluated at 50-digit precision
    CHECK(wavelength(63, kLlama) == doctest::Approx(54410.143130776750).epsilon(1e-13));

    for (int d = 0; d < kLlama.pair_count(); ++d) {
        CHECK(std::abs(wavelength(d, kLlama) * theta(d, kLlama) / (2.0 * kPi) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(wavelength(64, kLlama), std::out_of_range);
}

TEST_CASE("build_base_table") {
    const FrequencyTable tiny = build_base_table(RopeParams{10000.0, 4, 2048});
    REQUIRE(tiny.entries.size() == 2);
    CHECK(tiny.entries[0].theta_base == 1.0);
    CHECK(tiny.entries[1].theta_base == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(tiny.mscale == 1.0);
    CHECK(tiny.scheme_tag == "none");
    test::check_table_invariants(tiny);

    const FrequencyTable single = build_base_table(RopeParams{10000.0, 2, 64});
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].theta_base == 1.0);
    CHECK(single.entries[0].wavelength == doctest::Approx(2.0 * kPi).epsilon(1e-15));

    // Code Llama style manual base override
    const FrequencyTable wide = build_base_table(RopeParams{1e6, 128, 16384});
    test::check_table_invariants(wide);
    CHECK(wide.entries[0].theta_base == 1.0);
    CHECK(wide.entries[63].theta_base ==
          doctest::Approx(std::pow(1e6, -126.0 / 128.0)).epsilon(1e-14));

    SUBCASE("theta_scaled mirrors theta_base and gamma is zero") {
        const FrequencyTable table = build_base_table(kLlama);
        for (const FrequencyEntry& entry : table.entries) {
            CHECK(entry.theta_scaled == entry.theta_base);
            CHECK(entry.ramp_gamma == 0.0);
        }
    }

    CHECK_THROWS_AS(build_base_table(RopeParams{10000.0, 3, 64}), std::invalid_argument);
    CHECK_THROWS_AS(build_base_table(RopeParams{10000.0, 0, 64}), std::invalid_argument);
    CHECK_THROWS_AS(build_base_table(RopeParams{1.0, 4, 64}), std::invalid_argument);
    CHECK_THROWS_AS(build_base_table(RopeParams{10000.0, 4, 0}), std::invalid_argument);
}

TEST_CASE("apply_rotation basics") {
    FrequencyTable table = build_base_table(RopeParams{10000.0, 2, 64});

    const std::vector<double> unit{1.0, 0.0};
    CHECK(apply_rotation(unit, 0.0, table) == std::vector<double>{1.0, 0.0});

    SUBCASE("quarter turn") {
        table.entries[0].theta_scaled = kPi / 2.0;  // m=1 rotates by pi/2
        const std::vector<double> out = apply_rotation(unit, 1.0, table);
        CHECK(std::abs(out[0]) < 1e-12);
        CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("explicit 2x2 rotation oracle") {
        table.entries[0].theta_scaled = 0.013;
        const std::vector<double> out = apply_rotation(std::vector<double>{3.0, 4.0}, 17.0, table);
        // (3cos - 4sin, 3sin + 4cos) at angle 0.221, evaluated at 50-digit precision
        CHECK(out[0] == doctest::Approx(2.0502145503746450).epsilon(1e-12));
        CHECK(out[1] == doctest::Approx(4.5603311609390926).epsilon(1e-12));
    }

    SUBCASE("mscale multiplies the magnitude") {
        table.mscale = 2.0;
        const std::vector<double> out = apply_rotation(unit, 0.0, table);
        CHECK(out[0] == 2.0);
        CHECK(out[1] == 0.0);
    }

    CHECK_THROWS_AS(apply_rotation(std::vector<double>{1.0, 0.0, 0.0}, 0.0, table),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_rotation(unit, -1.0, table), std::invalid_argument);
}

TEST_CASE("attention_score basics") {
    const FrequencyTable table = build_base_table(RopeParams{10000.0, 2, 64});

    PositionedPair same{{1.0, 0.0}, {1.0, 0.0}, 5, 5};
    CHECK(attention_score(same, table) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    PositionedPair orthogonal{{1.0, 0.0}, {0.0, 1.0}, 9, 9};
    CHECK(std::abs(attention_score(orthogonal, table)) < 1e-15);

    Rng rng(11);
    const FrequencyTable wide = build_base_table(kLlama);
    PositionedPair pair;
    pair.q = test::random_vector(rng, 128);
    pair.k = test::random_vector(rng, 128);
    pair.m = 7;
    pair.n = 3;
    const double near = attention_score(pair, wide);
    pair.m = 104;
    pair.n = 100;
    CHECK(attention_score(pair, wide) == doctest::Approx(near).epsilon(1e-9));

    PositionedPair bad{{1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 0, 0};
    CHECK_THROWS_AS(attention_score(bad, table), std::invalid_argument);
}

TEST_CASE("relative position identity across dims and offsets") {
    Rng rng(17);
    for (int dim : {2, 8, 64, 128}) {
        const RopeParams params{10000.0, dim, 4096};
        const FrequencyTable table = build_base_table(params);
        const std::int64_t span = 10 * params.trained_context;
        for (int trial = 0; trial < 100; ++trial) {
            PositionedPair pair;
            pair.q = test::random_unit_vector(rng, dim);
            pair.k = test::random_unit_vector(rng, dim);
            pair.m = static_cast<std::int64_t>(rng.uniform() * span);
            pair.n = static_cast<std::int64_t>(rng.uniform() * span);
            const double score = attention_score(pair, table);
            const std::int64_t room = span - std::max(pair.m, pair.n);
            const std::int64_t shift = static_cast<std::int64_t>(rng.uniform() * room);
            pair.m += shift;
            pair.n += shift;
            CHECK(std::abs(attention_score(pair, table) - score) < 1e-9);
        }
    }
}

TEST_CASE("rotation is an isometry scaled by mscale") {
    Rng rng(23);
    FrequencyTable table = build_base_table(kLlama);
    table.mscale = 1.3465735902799727;
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> v = test::random_vector(rng, 128);
        double in_sq = 0.0;
        for (double x : v) in_sq += x * x;
        const std::vector<double> out = apply_rotation(v, rng.uniform() * 4e4, table);
        double out_sq = 0.0;
        for (double x : out) out_sq += x * x;
        const double expected = table.mscale * std::sqrt(in_sq);
        CHECK(std::sqrt(out_sq) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("rotations compose additively") {
    Rng rng(29);
    const FrequencyTable table = build_base_table(kLlama);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> v = test::random_vector(rng, 128);
        const double m1 = rng.uniform() * 2e4;
        const double m2 = rng.uniform() * 2e4;
        const std::vector<double> chained =
            apply_rotation(apply_rotation(v, m1, table), m2, table);
        const std::vector<double> direct = apply_rotation(v, m1 + m2, table);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(std::abs(chained[i] - direct[i]) < 1e-9);
        }
    }
}

}  // TEST_SUITE
