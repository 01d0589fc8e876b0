#include <doctest.h>

#include "oracle.hpp"

TEST_CASE("library agrees with brute-force references on random instances") {
    for (std::uint64_t seed : {1U, 2U}) {
        const auto report = ltd::oracle::run_suite(8, 200, seed);
        for (const auto& f : report.failures) MESSAGE(f);
        for (const auto& [name, tally] : report.properties) {
            INFO(name);
            CHECK(tally.failures == 0);
        }
        CHECK(report.passed());
        CHECK(report.total_checks() > 1000);
    }
}
