#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <gmpxx.h>

#include "epbound/checks.hpp"
#include "epbound/numerics.hpp"

using namespace epbound;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return g;
}

} // namespace

TEST_CASE("tail check, exact mode") {
    SUBCASE("single sign pair, one bound, one point") {
        // P(Z >= 2) = 1/4 against exp(-4/10) with v = 2.
        const Scenario s = build_rademacher({{1.0, 1.0}});
        std::vector<TailBoundDef> only{{"upper_c_simple", Side::Upper, [](double x, double v) {
                                            return upper_tail_bound(x, BoundParams{0.0, v},
                                                                    TailForm::CSimple);
                                        }}};
        const CheckReport r = check_tail_bounds(s, {2.0}, CheckMode::exact(), only);
        CHECK(r.pass);
        CHECK_FALSE(r.advisory);
        CHECK(std::fabs(r.worst_margin - (std::exp(-0.4) - 0.25)) <= 1e-12);
    }
    SUBCASE("two-function scenario, lower side") {
        // P(Z <= 0) = 1/2 against exp(-1/10) with v = 4.
        const Scenario s = build_rademacher({{1.0, 1.0}, {-1.0, -1.0}});
        std::vector<TailBoundDef> only{{"lower_c_simple", Side::Lower, [](double x, double v) {
                                            return lower_tail_bound(x, BoundParams{0.0, v},
                                                                    TailForm::CSimple);
                                        }}};
        const CheckReport r = check_tail_bounds(s, {1.0}, CheckMode::exact(), only);
        CHECK(r.pass);
        CHECK(std::fabs(r.worst_margin - (std::exp(-0.1) - 0.5)) <= 1e-12);
    }
    SUBCASE("full bound set on several scenarios") {
        for (const Scenario& s :
             {build_rademacher({{1.0, 1.0}}), build_rademacher({{1.0, 1.0}, {-1.0, -1.0}}),
              build_set_indexed(2, {{0.7, 0.3}, {0.3, 0.7}}, {{1}, {0}})}) {
            const CheckReport r = check_tail_bounds(s, linspace(0.0, 3.0, 13),
                                                    CheckMode::exact());
            CHECK(r.pass);
            CHECK(r.worst_margin >= -1e-12);
        }
    }
    SUBCASE("degenerate scenario is skipped with a notice") {
        const Scenario s = build_rademacher({{0.0, 0.0}});
        const CheckReport r = check_tail_bounds(s, {0.0, 1.0}, CheckMode::exact());
        CHECK(r.pass);
        CHECK(r.domain.find("skipped") != std::string::npos);
    }
    CHECK_THROWS_AS(check_tail_bounds(build_rademacher({{1.0}}), {-1.0}, CheckMode::exact()),
                    std::invalid_argument);
}

TEST_CASE("tail check, Monte Carlo mode is advisory") {
    const Scenario s = build_rademacher({{1.0, 1.0}, {-1.0, -1.0}});
    const CheckReport exact = check_tail_bounds(s, linspace(0.0, 2.5, 11), CheckMode::exact());
    const CheckReport mc =
        check_tail_bounds(s, linspace(0.0, 2.5, 11), CheckMode::monte_carlo(50000, 33));
    CHECK(exact.pass);
    CHECK(mc.advisory);
    // Exact mode passes, so the Monte Carlo check must not report a failure.
    CHECK(mc.pass);
    CHECK(mc.domain.find("advisory") != std::string::npos);
}

TEST_CASE("log-Laplace check") {
    SUBCASE("single-def slack is exact") {
        const Scenario s = build_rademacher({{1.0, 1.0}});
        std::vector<LaplaceBoundDef> only{
            {"upper_subgamma", false, 0.6, [](double t, const BoundParams& p) {
                 return subgamma_log_laplace_bound(t, p);
             }}};
        const CheckReport r = check_log_laplace_bounds(s, {0.5}, only);
        CHECK(r.pass);
        // v = 2: bound = 2 * 0.25/0.5 = 1; exact L(0.5) = log((e^{-1}+2+e)/4).
        const double expected = 1.0 - 0.2402290139165550493;
        CHECK(std::fabs(r.worst_margin - expected) <= 1e-12);
    }
    SUBCASE("standard set on scenarios") {
        std::vector<double> grid = linspace(0.0, 3.0, 25);
        grid.push_back(0.01);
        grid.push_back(phi_unit_root());
        for (const Scenario& s :
             {build_rademacher({{1.0, 1.0}}), build_rademacher({{1.0, 1.0}, {-1.0, -1.0}}),
              build_set_indexed(3, {{0.2, 0.5, 0.3}}, {{0}, {1, 2}})}) {
            const CheckReport r = check_log_laplace_bounds(s, grid);
            CHECK(r.pass);
            CHECK(r.worst_margin >= -1e-12);
        }
    }
    CHECK_THROWS_AS(check_log_laplace_bounds(build_rademacher({{1.0}}), {-0.5}),
                    std::invalid_argument);
}

TEST_CASE("variance check") {
    SUBCASE("single function attains equality") {
        const CheckReport r = check_variance_bound(build_rademacher({{1.0, 1.0}}));
        CHECK(r.pass);
        CHECK(std::fabs(r.worst_margin) <= 1e-12);
    }
    SUBCASE("two-function scenario has slack 3") {
        const CheckReport r = check_variance_bound(build_rademacher({{1.0, 1.0}, {-1.0, -1.0}}));
        CHECK(r.pass);
        // Var Z = 1 <= 2 + 2; V = V_n = 2 exactly here.
        CHECK(r.worst_margin >= -1e-12);
    }
    SUBCASE("set-indexed scenario") {
        CHECK(check_variance_bound(build_set_indexed(2, {{0.5, 0.5}}, {{1}})).pass);
    }
}

TEST_CASE("fault injection has teeth") {
    SUBCASE("deflated variance constant fails on the equality case") {
        const VarianceBoundDef deflated{
            "variance_upper_deflated",
            [](double v_n, double mean_z) { return 0.95 * v_n + 2.0 * mean_z; }};
        const CheckReport r = check_variance_bound(build_rademacher({{1.0, 1.0}}), deflated);
        CHECK_FALSE(r.pass);
        CHECK(r.worst_margin < -1e-3);
        CHECK_FALSE(r.violations.empty());
    }
    SUBCASE("deflated log-Laplace bound fails at small t") {
        std::vector<LaplaceBoundDef> deflated{
            {"upper_subgamma_deflated", false, 0.6, [](double t, const BoundParams& p) {
                 return 0.95 * subgamma_log_laplace_bound(t, p);
             }}};
        const CheckReport r =
            check_log_laplace_bounds(build_rademacher({{1.0}}), {0.001, 0.01, 0.3}, deflated);
        CHECK_FALSE(r.pass);
        CHECK(r.worst_margin < -1e-9);
    }
    SUBCASE("inflated tail constant still passes") {
        std::vector<TailBoundDef> inflated{
            {"upper_c_simple_inflated", Side::Upper, [](double x, double v) {
                 return std::exp(-x * x / (2.0 * v + 3.15 * x));
             }}};
        const CheckReport r = check_tail_bounds(build_rademacher({{1.0, 1.0}}),
                                                linspace(0.0, 3.0, 13), CheckMode::exact(),
                                                inflated);
        CHECK(r.pass);
    }
}

TEST_CASE("scalar inequality reports") {
    const auto reports = scalar_inequality_reports(128);
    REQUIRE(reports.size() == 6);
    for (const auto& r : reports) {
        INFO(r.check_name);
        CHECK(r.pass);
        CHECK(r.worst_margin >= -r.tolerance);
    }
    SUBCASE("series coefficients start at exactly zero") {
        const auto& series = reports[1];
        CHECK(series.check_name == "series_coefficients");
        CHECK(series.worst_margin == 0.0);
        // Exact low-order values: 2^2 b_2 = 1!(9-1) - 8 = 0 and
        // 2^3 b_3 = 2!(27-1) - 32 = 20, so b_3 = 2.5.
        mpz_class b2 = mpz_class(1) * (9 - 1) - 8;
        mpz_class b3 = mpz_class(2) * (27 - 1) - 32;
        CHECK(b2 == 0);
        CHECK(b3 == 20);
    }
    SUBCASE("merged view") {
        const CheckReport merged = check_scalar_inequalities(128);
        CHECK(merged.pass);
        CHECK(merged.worst_margin == 0.0); // the series equality case
    }
    CHECK_THROWS_AS(scalar_inequality_reports(0), std::invalid_argument);
}

TEST_CASE("entropy inequality check") {
    SUBCASE("symmetric signs at t = 1") {
        const CheckReport r = check_entropy_inequality(symmetric_sign(), {1.0});
        CHECK(r.pass);
        // RHS = 1, LHS = sinh(1) - cosh(1) log cosh(1).
        CHECK(std::fabs(r.worst_margin - (1.0 - 0.5058423943713682156)) <= 1e-12);
    }
    SUBCASE("point mass at zero") {
        const CheckReport r = check_entropy_inequality(CoordinateDist{{{0.0, 1.0}}}, {0.5, 1.0});
        CHECK(r.pass);
        CHECK(std::fabs(r.worst_margin) <= 1e-15);
    }
    SUBCASE("battery") {
        const auto battery = entropy_test_battery();
        CHECK(battery.size() >= 20);
        const auto grid = linspace(0.05, 3.0, 60);
        for (const auto& dist : battery) {
            CHECK(check_entropy_inequality(dist, grid).pass);
        }
    }
    CHECK_THROWS_AS(check_entropy_inequality(symmetric_sign(), {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_entropy_inequality(CoordinateDist{{{1.5, 1.0}}}, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("Legendre conjugate check") {
    const CheckReport r = check_legendre_conjugate({0.0, 1.0, 8.0, 25.0, 50.0});
    CHECK(r.pass);
    CHECK(r.worst_margin >= 0.0);
    CHECK_THROWS_AS(check_legendre_conjugate({60.0}), std::invalid_argument);
}

TEST_CASE("root interval check") {
    const CheckReport r = check_root_intervals();
    CHECK(r.pass);
    CHECK(r.domain.find("phi_root=0.46") != std::string::npos);
    CHECK(r.domain.find("crossing_root=0.76") != std::string::npos);
}

TEST_CASE("CheckReport invariant") {
    CheckReport r;
    r.check_name = "demo";
    r.tolerance = 1e-12;
    r.record("a", 0.5);
    CHECK(r.pass);
    CHECK(r.worst_margin == 0.5);
    r.record("b", -1e-13); // inside tolerance
    CHECK(r.pass);
    CHECK(r.violations.empty());
    r.record("c", -1.0);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_margin == -1.0);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].location == "c");
}
