#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ropelab/frequency_table.hpp"
#include "ropelab/rng.hpp"

namespace ropelab::test {

// Asserts the structural FrequencyTable contract: entry count and ordering,
// reciprocity of base theta/wavelength, monotone spectrum, frequencies that
// never increase, and a sane mscale.
inline void check_table_invariants(const FrequencyTable& table) {
    REQUIRE(static_cast<int>(table.entries.size()) == table.params.pair_count());
    for (std::size_t d = 0; d < table.entries.size(); ++d) {
        const FrequencyEntry& entry = table.entries[d];
        CHECK(entry.dim_index == static_cast<int>(d));
        CHECK(entry.theta_base > 0.0);
        CHECK(entry.theta_scaled > 0.0);
        CHECK(entry.theta_scaled <= entry.theta_base * (1.0 + 1e-12));
        CHECK(entry.ramp_gamma >= 0.0);
        CHECK(entry.ramp_gamma <= 1.0);
        const double product = entry.wavelength * entry.theta_base;
        CHECK(std::abs(product / (2.0 * std::numbers::pi) - 1.0) < 1e-12);
        if (d > 0) {
            CHECK(entry.theta_base < table.entries[d - 1].theta_base);
            CHECK(entry.wavelength > table.entries[d - 1].wavelength);
        }
    }
    CHECK(table.mscale >= 1.0);
}

inline std::vector<double> random_vector(Rng& rng, int dim) {
    std::vector<double> v(dim);
    for (double& x : v) {
        x = rng.normal();
    }
    return v;
}

inline std::vector<double> random_unit_vector(Rng& rng, int dim) {
    std::vector<double> v = random_vector(rng, dim);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

}  // namespace ropelab::test
