#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epbound/bounds.hpp"
#include "epbound/scenario.hpp"

namespace epbound {

struct CheckViolation {
    std::string location;
    double slack = 0.0;
};

// Pass/fail record for one certification check. Maintained invariant:
// pass <=> violations empty <=> worst_margin >= -tolerance.
struct CheckReport {
    std::string check_name;
    std::string domain;
    double tolerance = 1e-12;
    double worst_margin = 0.0;
    bool pass = true;
    bool advisory = false;
    std::vector<CheckViolation> violations;

    void record(const std::string& location, double slack);

  private:
    bool any_recorded_ = false;
};

struct CheckMode {
    enum class Kind { Exact, MonteCarlo };
    Kind kind = Kind::Exact;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;

    static CheckMode exact() { return {}; }
    static CheckMode monte_carlo(std::uint64_t trials, std::uint64_t seed, unsigned workers = 0) {
        return {Kind::MonteCarlo, trials, seed, workers};
    }
};

// Bounds-as-data: every check compares observations against a named set of
// bound evaluators, so perturbed sets can be injected to confirm the harness
// rejects deflated constants.
struct TailBoundDef {
    std::string name;
    Side side = Side::Upper;
    std::function<double(double x, double v)> eval;
};
std::vector<TailBoundDef> standard_tail_bounds();

struct LaplaceBoundDef {
    std::string name;
    bool left = false; // true: bounds log E e^{-tZ} + t E(Z); false: bounds log E e^{tZ}
    double t_max = 0.0;
    std::function<double(double t, const BoundParams& p)> eval;
    double tolerance = 1e-12; // 1e-9 where quadrature enters the evaluation
};
std::vector<LaplaceBoundDef> standard_laplace_bounds();

struct VarianceBoundDef {
    std::string name;
    std::function<double(double v_n, double mean_z)> eval;
};
VarianceBoundDef standard_variance_bound();

// Exact mode: bound(x; v) >= P(Z >= E+x) resp. P(Z <= E-x) with E, V_n exact.
// Monte Carlo mode: bound >= one-sided 3-sigma lower confidence bound of the
// frequency; the report is marked advisory (E(Z) itself is estimated).
CheckReport check_tail_bounds(const Scenario& s, const std::vector<double>& x_grid,
                              const CheckMode& mode,
                              const std::vector<TailBoundDef>& bounds = standard_tail_bounds());

// Exact log-Laplace transform against every bound on its own t-domain.
// Enumerable scenarios only.
CheckReport check_log_laplace_bounds(const Scenario& s, const std::vector<double>& t_grid,
                                     const std::vector<LaplaceBoundDef>& bounds =
                                         standard_laplace_bounds());

// Var Z <= v_n + 2 E(Z) plus the sandwich V_n <= V <= V_n + 16 E(Z).
CheckReport check_variance_bound(const Scenario& s,
                                 const VarianceBoundDef& bound = standard_variance_bound());

// Grid checks for the scalar inequalities behind the bounds: the quadratic
// envelope of t x e^{tx} + (t+1)(1 - e^{tx}), exact nonnegativity of the
// series coefficients (j-1)!((3/2)^j - (1/2)^j) - 2^{j-1}, the envelope
// t <= phi(t) <= t e^{2t} - t^2/2, the two kernel bounds against
// (e^{3t} - 3t - 1)/9, and (e^{3t} - 3t - 1)/9 <= t^2/(2 - 2t).
std::vector<CheckReport> scalar_inequality_reports(int points_per_unit = 512);
CheckReport check_scalar_inequalities(int points_per_unit = 512);

// E(tY e^{tY}) - E(e^{tY}) log E(e^{tY}) <= E(Y^2)(1 + (t-1)e^t) for a
// discrete Y supported in [-1, 1], expectations exact over atoms; t > 0.
CheckReport check_entropy_inequality(const CoordinateDist& dist,
                                     const std::vector<double>& t_grid);

// Deterministic battery of two-atom distributions for the entropy check.
std::vector<CoordinateDist> entropy_test_battery();

// Grid-search conjugate of t^2/(2-3t) against the closed form within 1e-8,
// and the closed form's Chernoff tail against the tight upper tail bound.
CheckReport check_legendre_conjugate(const std::vector<double>& x_grid);

// Interval and residual assertions for the two cached roots.
CheckReport check_root_intervals();

} // namespace epbound
