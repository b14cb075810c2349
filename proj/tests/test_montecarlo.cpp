#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "epbound/montecarlo.hpp"
#include "epbound/report_io.hpp"

using namespace epbound;

TEST_CASE("counter-based uniforms are pure functions of their key") {
    CHECK(uniform01(1, 2, 3) == uniform01(1, 2, 3));
    CHECK(uniform01(1, 2, 3) != uniform01(1, 3, 2));
    CHECK(uniform01(1, 2, 3) != uniform01(2, 2, 3));
    for (std::uint64_t t = 0; t < 50; ++t) {
        const double u = uniform01(99, t, 0);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sample_supremum") {
    SUBCASE("zero functions always give zero") {
        const Scenario s = build_rademacher({{0.0, 0.0}});
        for (std::uint64_t t = 0; t < 20; ++t) CHECK(sample_supremum(s, 7, t) == 0.0);
    }
    SUBCASE("reproducible draws") {
        const Scenario s = build_rademacher({{1.0, 1.0}, {-1.0, -1.0}});
        for (std::uint64_t t = 0; t < 100; ++t) {
            CHECK(sample_supremum(s, 42, t) == sample_supremum(s, 42, t));
        }
    }
    SUBCASE("empirical mean matches enumeration") {
        const Scenario s = build_rademacher({{1.0, 1.0}, {-1.0, -1.0}});
        const std::uint64_t trials = 200000;
        double sum = 0.0;
        for (std::uint64_t t = 0; t < trials; ++t) sum += sample_supremum(s, 2024, t);
        const double mean = sum / static_cast<double>(trials);
        // Exact mean 1, sd 1; allow 4 sigma.
        CHECK(std::fabs(mean - 1.0) <= 4.0 / std::sqrt(static_cast<double>(trials)));
    }
}

TEST_CASE("estimate_stats") {
    SUBCASE("deterministic scenario") {
        const Scenario s = build_rademacher({{0.0, 0.0}});
        const SimResult r = estimate_stats(s, 1000, 5);
        CHECK(r.mean_z == 0.0);
        CHECK(r.var_z == 0.0);
        CHECK(r.median_z == 0.0);
        CHECK(r.se_defined);
        CHECK(r.se_mean == 0.0);
    }
    SUBCASE("single trial flags undefined standard errors") {
        const Scenario s = build_rademacher({{1.0, 1.0}});
        const SimResult r = estimate_stats(s, 1, 5);
        CHECK_FALSE(r.se_defined);
        CHECK(r.mean_z == sample_supremum(s, 5, 0));
    }
    SUBCASE("tail frequencies near exact probabilities") {
        const Scenario s = build_rademacher({{1.0, 1.0}});
        const std::uint64_t trials = 200000;
        const SimResult r = estimate_stats(s, trials, 11, {2.0});
        REQUIRE(r.tails.size() == 1);
        const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(trials));
        CHECK(std::fabs(r.tails[0].freq_ge - 0.25) <= 4.0 * se);
        CHECK(r.tails[0].lcb_ge <= r.tails[0].freq_ge);
        CHECK(r.tails[0].lcb_le <= r.tails[0].freq_le);
        CHECK(r.tails[0].count_ge + r.tails[0].count_le >= trials); // overlap at equality
    }
    SUBCASE("identical results for any worker count") {
        const Scenario s = build_rademacher({{1.0, 0.5}, {-0.25, 1.0}});
        const SimResult a = estimate_stats(s, 20000, 7, {0.0, 1.0}, 1);
        const SimResult b = estimate_stats(s, 20000, 7, {0.0, 1.0}, 8);
        CHECK(sim_result_to_json(a) == sim_result_to_json(b));
        CHECK(a.mean_z == b.mean_z);
        CHECK(a.var_z == b.var_z);
        CHECK(a.median_z == b.median_z);
    }
    SUBCASE("standard errors shrink like 1/sqrt(trials)") {
        const Scenario s = build_rademacher({{1.0, 1.0}, {-1.0, -1.0}});
        const SimResult small = estimate_stats(s, 10000, 3);
        const SimResult big = estimate_stats(s, 40000, 3);
        CHECK(big.se_mean == doctest::Approx(small.se_mean / 2.0).epsilon(0.1));
        CHECK(big.se_var == doctest::Approx(small.se_var / 2.0).epsilon(0.1));
    }
    CHECK_THROWS_AS(estimate_stats(build_rademacher({{1.0}}), 0, 1), std::invalid_argument);
}

TEST_CASE("binomial lower confidence bound") {
    CHECK(binomial_lcb(0, 1000) == 0.0);
    // Clopper-Pearson branch (below 50 successes), reference scipy.stats.beta.ppf.
    CHECK(std::fabs(binomial_lcb(5, 1000) - 0.0007931331460901117) <= 1e-9);
    CHECK(std::fabs(binomial_lcb(1, 1000) - 1.350809052404823e-06) <= 1e-12);
    CHECK(std::fabs(binomial_lcb(49, 100000) - 0.0003063759061692231) <= 1e-9);
    // Normal branch.
    const double p = 0.5;
    const double expected = p - 3.0 * std::sqrt(p * (1.0 - p) / 1000.0);
    CHECK(std::fabs(binomial_lcb(500, 1000) - expected) <= 1e-12);
    // Monotone in successes.
    CHECK(binomial_lcb(10, 1000) < binomial_lcb(20, 1000));
    CHECK(binomial_lcb(900, 1000) < binomial_lcb(950, 1000));
    CHECK_THROWS_AS(binomial_lcb(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(binomial_lcb(5, 4), std::invalid_argument);
}
