#include <algorithm>

#include "doctest.h"
#include "ropelab/validate.hpp"

using namespace ropelab;

TEST_SUITE("validate") {

TEST_CASE("default configuration passes every check") {
    ValidationOptions options;
    const std::vector<CheckResult> results = run_validation(options);
    CHECK(results.size() >= 19);
    for (const CheckResult& result : results) {
        INFO(result.name, ": ", result.detail);
        CHECK(result.passed);
    }
}

TEST_CASE("injected ramp fault is caught") {
    ValidationOptions options;
    options.flip_ramp_sign = true;
    const std::vector<CheckResult> results = run_validation(options);
    const auto failed = std::count_if(results.begin(), results.end(),
                                      [](const CheckResult& r) { return !r.passed; });
    CHECK(failed >= 1);
    const auto ramp_check =
        std::find_if(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.name == "schemes/ramp_shape"; });
    REQUIRE(ramp_check != results.end());
    CHECK(!ramp_check->passed);
}

TEST_CASE("degenerate head_dim exercises the rejection contract") {
    ValidationOptions options;
    options.params.head_dim = 2;
    options.params.trained_context = 64;
    const std::vector<CheckResult> results = run_validation(options);
    for (const CheckResult& result : results) {
        INFO(result.name, ": ", result.detail);
        CHECK(result.passed);
    }
}

}  // TEST_SUITE
