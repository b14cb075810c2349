#include "epbound/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <gmpxx.h>

#include "epbound/montecarlo.hpp"
#include "epbound/numerics.hpp"

namespace epbound {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kQuadTol = 1e-9; // where quadrature enters the slack
constexpr std::size_t kMaxStoredViolations = 1000;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string grid_text(const std::vector<double>& g, const char* var) {
    if (g.empty()) return std::string(var) + " grid empty";
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    std::ostringstream os;
    os << var << " in [" << fmt(*lo) << ", " << fmt(*hi) << "] (" << g.size() << " points)";
    return os.str();
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> g;
    g.reserve(count);
    if (count == 1) {
        g.push_back(lo);
        return g;
    }
    for (std::size_t i = 0; i < count; ++i) {
        g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    g.back() = hi;
    return g;
}

// Shared margin bookkeeping; location strings are only built on violation.
struct MarginTracker {
    CheckReport& r;
    bool any = false;

    template <class LocFn>
    void note(double slack, LocFn&& loc) {
        if (!any || slack < r.worst_margin) {
            r.worst_margin = slack;
            any = true;
        }
        if (slack < -r.tolerance) {
            r.pass = false;
            if (r.violations.size() < kMaxStoredViolations) r.violations.push_back({loc(), slack});
        }
    }
};

// Cumulative integral of f along an ascending grid starting at grid[0] = 0.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const std::vector<double>& grid) {
    std::vector<double> out(grid.size(), 0.0);
    const QuadratureSpec panel{1e-13, 60};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out[i] = out[i - 1] + quadrature(f, grid[i - 1], grid[i], panel);
    }
    return out;
}

} // namespace

void CheckReport::record(const std::string& location, double slack) {
    if (!any_recorded_ || slack < worst_margin) {
        worst_margin = slack;
        any_recorded_ = true;
    }
    if (slack < -tolerance) {
        pass = false;
        if (violations.size() < kMaxStoredViolations) violations.push_back({location, slack});
    }
}

std::vector<TailBoundDef> standard_tail_bounds() {
    auto form = [](TailForm f, Side s) {
        return [f, s](double x, double v) { return tail_bound(x, BoundParams{0.0, v}, f, s); };
    };
    return {
        {"upper_b", Side::Upper, form(TailForm::B, Side::Upper)},
        {"upper_c_tight", Side::Upper, form(TailForm::CTight, Side::Upper)},
        {"upper_c_simple", Side::Upper, form(TailForm::CSimple, Side::Upper)},
        {"lower_b", Side::Lower, form(TailForm::B, Side::Lower)},
        {"lower_c_tight", Side::Lower, form(TailForm::CTight, Side::Lower)},
        {"lower_c_simple", Side::Lower, form(TailForm::CSimple, Side::Lower)},
    };
}

std::vector<LaplaceBoundDef> standard_laplace_bounds() {
    std::vector<LaplaceBoundDef> defs;
    defs.push_back({"upper_double_exp", false, 1e308,
                    [](double t, const BoundParams& p) { return upper_log_laplace_bound(t, p).value; },
                    kExactTol});
    defs.push_back({"upper_subgamma", false, std::nextafter(2.0 / 3.0, 0.0),
                    [](double t, const BoundParams& p) { return subgamma_log_laplace_bound(t, p); },
                    kExactTol});
    defs.push_back({"lower_bennett", true, 230.0,
                    [](double t, const BoundParams& p) { return lower_log_laplace_bound(t, p).value; },
                    kExactTol});
    defs.push_back({"lower_refined", true, phi_unit_root(),
                    [](double t, const BoundParams& p) {
                        return lower_log_laplace_refined(t, p.mean_z, p.v_n);
                    },
                    kQuadTol});
    return defs;
}

VarianceBoundDef standard_variance_bound() {
    return {"variance_upper",
            [](double v_n, double mean_z) { return variance_upper_bound(v_n, mean_z); }};
}

CheckReport check_tail_bounds(const Scenario& s, const std::vector<double>& x_grid,
                              const CheckMode& mode, const std::vector<TailBoundDef>& bounds) {
    for (double x : x_grid) {
        if (!(x >= 0.0)) throw std::invalid_argument("check_tail_bounds: x grid must be >= 0");
    }
    CheckReport r;
    r.check_name = "tail_bounds";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};
    const double vn = max_variance(s);
    std::ostringstream dom;
    dom << scenario_summary(s) << "; ";

    if (mode.kind == CheckMode::Kind::Exact) {
        const ExactSummary sum = enumerate_exact(s);
        // E(Z) >= 0 always; enumeration can leave -1e-17 of rounding noise.
        const BoundParams p{std::max(0.0, sum.mean_z), vn};
        const double v = p.v();
        if (!(v > 0.0)) {
            dom << "exact; skipped: v = 0 (Z is deterministic); " << grid_text(x_grid, "x");
            r.domain = dom.str();
            return r;
        }
        for (double x : x_grid) {
            for (const auto& def : bounds) {
                const double bound = def.eval(x, v);
                const double target = def.side == Side::Upper
                                          ? sum.prob_at_least(sum.mean_z + x)
                                          : sum.prob_at_most(sum.mean_z - x);
                tracker.note(bound - target, [&] { return def.name + " x=" + fmt(x); });
            }
        }
        dom << "exact; E(Z)=" << fmt(sum.mean_z) << " v=" << fmt(v) << "; "
            << grid_text(x_grid, "x");
    } else {
        r.advisory = true;
        // The mean estimate fixes the thresholds; the second pass reuses the
        // identical draws, so nothing depends on worker count.
        const SimResult base = estimate_stats(s, mode.trials, mode.seed, {}, mode.workers);
        const double mean = base.mean_z;
        const double v = vn + 2.0 * mean;
        if (!(v > 0.0)) {
            dom << "mc; skipped: estimated v <= 0; " << grid_text(x_grid, "x");
            r.domain = dom.str();
            return r;
        }
        std::vector<double> thresholds;
        thresholds.reserve(2 * x_grid.size());
        for (double x : x_grid) thresholds.push_back(mean + x);
        for (double x : x_grid) thresholds.push_back(mean - x);
        const SimResult sim = estimate_stats(s, mode.trials, mode.seed, thresholds, mode.workers);
        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            const double x = x_grid[i];
            for (const auto& def : bounds) {
                const double bound = def.eval(x, v);
                const double lcb = def.side == Side::Upper ? sim.tails[i].lcb_ge
                                                           : sim.tails[x_grid.size() + i].lcb_le;
                tracker.note(bound - lcb, [&] { return def.name + " x=" + fmt(x); });
            }
        }
        dom << "mc advisory; trials=" << mode.trials << " seed=" << mode.seed
            << " E(Z) est=" << fmt(mean) << " v=" << fmt(v) << "; " << grid_text(x_grid, "x");
    }
    r.domain = dom.str();
    return r;
}

CheckReport check_log_laplace_bounds(const Scenario& s, const std::vector<double>& t_grid,
                                     const std::vector<LaplaceBoundDef>& bounds) {
    for (double t : t_grid) {
        if (!(t >= 0.0)) {
            throw std::invalid_argument("check_log_laplace_bounds: t grid must be >= 0");
        }
    }
    CheckReport r;
    r.check_name = "log_laplace_bounds";
    r.tolerance = kExactTol;
    for (const auto& def : bounds) r.tolerance = std::max(r.tolerance, def.tolerance);
    MarginTracker tracker{r};

    const double vn = max_variance(s);
    const ExactSummary sum = enumerate_exact(s);
    const BoundParams p{std::max(0.0, sum.mean_z), vn};
    for (double t : t_grid) {
        for (const auto& def : bounds) {
            if (t > def.t_max) continue;
            const double bound = def.eval(t, p);
            const double target =
                def.left ? sum.log_mgf(-t) + t * sum.mean_z : sum.log_mgf(t);
            tracker.note(bound - target, [&] { return def.name + " t=" + fmt(t); });
        }
    }
    std::ostringstream dom;
    dom << scenario_summary(s) << "; exact; E(Z)=" << fmt(sum.mean_z) << " v=" << fmt(p.v())
        << "; " << grid_text(t_grid, "t");
    r.domain = dom.str();
    return r;
}

CheckReport check_variance_bound(const Scenario& s, const VarianceBoundDef& bound) {
    CheckReport r;
    r.check_name = "variance_bound";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};

    const ExactSummary sum = enumerate_exact(s);
    const double mean = std::max(0.0, sum.mean_z);
    const double vn = max_variance(s);
    const double V = talagrand_variance(s);
    tracker.note(bound.eval(vn, mean) - sum.var_z,
                 [&] { return bound.name + " Var Z <= bound"; });
    tracker.note(V - vn, [] { return std::string("sandwich V >= V_n"); });
    tracker.note(vn + 16.0 * mean - V,
                 [] { return std::string("sandwich V <= V_n + 16 E(Z)"); });

    std::ostringstream dom;
    dom << scenario_summary(s) << "; exact; Var Z=" << fmt(sum.var_z) << " V_n=" << fmt(vn)
        << " V=" << fmt(V) << " E(Z)=" << fmt(sum.mean_z);
    r.domain = dom.str();
    return r;
}

namespace {

CheckReport eta_quadratic_report(int ppu) {
    CheckReport r;
    r.check_name = "eta_quadratic_envelope";
    r.domain = "t in (0,3], x in [-3,1], " + std::to_string(ppu) + " points per unit";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};
    for (int i = 1; i <= 3 * ppu; ++i) {
        const double t = static_cast<double>(i) / ppu;
        for (int j = 0; j <= 4 * ppu; ++j) {
            const double x = -3.0 + static_cast<double>(j) / ppu;
            const double etx = std::exp(t * x);
            const double eta = t * x * etx + (t + 1.0) * (1.0 - etx);
            const double rhs = -x * t * t + 0.5 * t * t * x * x;
            tracker.note(rhs - eta, [&] { return "t=" + fmt(t) + " x=" + fmt(x); });
        }
    }
    return r;
}

CheckReport series_coefficients_report() {
    CheckReport r;
    r.check_name = "series_coefficients";
    r.domain = "j = 2..30, exact integer arithmetic; b_2 must vanish";
    r.tolerance = 0.0;
    bool any = false;
    mpz_class factorial = 1; // (j-1)! at loop head
    for (unsigned j = 2; j <= 30; ++j) {
        factorial *= (j - 1);
        mpz_class pow3;
        mpz_ui_pow_ui(pow3.get_mpz_t(), 3, j);
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, 2 * j - 1);
        const mpz_class scaled = factorial * (pow3 - 1) - pow2; // 2^j b_j
        const double b_j = std::ldexp(scaled.get_d(), -static_cast<int>(j));
        if (!any || b_j < r.worst_margin) {
            r.worst_margin = b_j;
            any = true;
        }
        if (sgn(scaled) < 0) {
            r.pass = false;
            r.violations.push_back({"j=" + std::to_string(j), b_j});
        }
        if (j == 2 && scaled != 0) {
            r.pass = false;
            r.violations.push_back({"j=2 not exactly zero", b_j});
        }
    }
    return r;
}

CheckReport phi_envelope_report(int ppu) {
    CheckReport r;
    r.check_name = "phi_envelope";
    const double hi = phi_unit_root();
    r.domain = "t in [0, " + fmt(hi) + "], " + std::to_string(ppu) + " points per unit";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};
    const auto grid = linspace(0.0, hi, static_cast<std::size_t>(std::ceil(hi * ppu)) + 1);
    for (double t : grid) {
        const double ph = phi(t);
        tracker.note(ph - t, [&] { return "phi(t) >= t at t=" + fmt(t); });
        tracker.note(t * std::exp(2.0 * t) - 0.5 * t * t - ph,
                     [&] { return "phi(t) <= t e^{2t} - t^2/2 at t=" + fmt(t); });
    }
    return r;
}

CheckReport kernel_bound_report(int ppu) {
    CheckReport r;
    r.check_name = "kernel_bound";
    r.domain = "t e^{-t} J(t) + e^t - t - 1 <= (e^{3t}-3t-1)/9 on [0, 4], " +
               std::to_string(ppu) + " points per unit";
    r.tolerance = kQuadTol;
    MarginTracker tracker{r};
    const auto grid = linspace(0.0, 4.0, static_cast<std::size_t>(4) * ppu + 1);
    const auto raw = cumulative_integral(kernel_integrand, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double J = 0.5 * raw[i];
        const double lhs = t * std::exp(-t) * J + std::expm1(t) - t;
        const double rhs = (std::expm1(3.0 * t) - 3.0 * t) / 9.0;
        tracker.note(rhs - lhs, [&] { return "t=" + fmt(t); });
    }
    return r;
}

CheckReport phi_integral_bound_report(int ppu) {
    CheckReport r;
    r.check_name = "phi_integral_bound";
    const double hi = phi_unit_root();
    r.domain = "t(1 - e^{-I(t)}) <= (2/9)(e^{3t}-3t-1) on [0, " + fmt(hi) + "], " +
               std::to_string(ppu) + " points per unit";
    r.tolerance = kQuadTol;
    MarginTracker tracker{r};
    const auto grid = linspace(0.0, hi, static_cast<std::size_t>(std::ceil(hi * ppu)) + 1);
    const auto I = cumulative_integral(phi_over_u, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double lhs = t * (-std::expm1(-I[i]));
        const double rhs = (2.0 / 9.0) * (std::expm1(3.0 * t) - 3.0 * t);
        tracker.note(rhs - lhs, [&] { return "t=" + fmt(t); });
    }
    return r;
}

CheckReport cubic_exp_report(int ppu) {
    CheckReport r;
    r.check_name = "cubic_exp_bound";
    r.domain = "(e^{3t}-3t-1)/9 <= t^2/(2-2t) on [0, 0.999], " + std::to_string(ppu) +
               " points per unit";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};
    const auto grid =
        linspace(0.0, 0.999, static_cast<std::size_t>(std::ceil(0.999 * ppu)) + 1);
    for (double t : grid) {
        const double lhs = (std::expm1(3.0 * t) - 3.0 * t) / 9.0;
        const double rhs = t * t / (2.0 - 2.0 * t);
        tracker.note(rhs - lhs, [&] { return "t=" + fmt(t); });
    }
    return r;
}

} // namespace

std::vector<CheckReport> scalar_inequality_reports(int points_per_unit) {
    if (points_per_unit < 1) {
        throw std::invalid_argument("scalar_inequality_reports: points_per_unit must be >= 1");
    }
    std::vector<CheckReport> out;
    out.push_back(eta_quadratic_report(points_per_unit));
    out.push_back(series_coefficients_report());
    out.push_back(phi_envelope_report(points_per_unit));
    out.push_back(kernel_bound_report(points_per_unit));
    out.push_back(phi_integral_bound_report(points_per_unit));
    out.push_back(cubic_exp_report(points_per_unit));
    return out;
}

CheckReport check_scalar_inequalities(int points_per_unit) {
    const auto parts = scalar_inequality_reports(points_per_unit);
    CheckReport merged;
    merged.check_name = "scalar_inequalities";
    merged.tolerance = 0.0;
    std::ostringstream dom;
    bool any = false;
    for (const auto& part : parts) {
        if (any) dom << "; ";
        dom << part.check_name;
        merged.tolerance = std::max(merged.tolerance, part.tolerance);
        if (!any || part.worst_margin < merged.worst_margin) {
            merged.worst_margin = part.worst_margin;
        }
        any = true;
        if (!part.pass) merged.pass = false;
        for (const auto& v : part.violations) {
            if (merged.violations.size() < kMaxStoredViolations) {
                merged.violations.push_back({part.check_name + ": " + v.location, v.slack});
            }
        }
    }
    merged.domain = dom.str();
    return merged;
}

CheckReport check_entropy_inequality(const CoordinateDist& dist,
                                     const std::vector<double>& t_grid) {
    if (dist.atoms.empty()) {
        throw std::invalid_argument("check_entropy_inequality: distribution has no atoms");
    }
    double psum = 0.0;
    for (const Atom& a : dist.atoms) {
        if (!(a.prob > 0.0 && a.prob <= 1.0) || !(a.value >= -1.0 && a.value <= 1.0)) {
            throw std::invalid_argument("check_entropy_inequality: support must lie in [-1, 1] "
                                        "with probabilities in (0, 1]");
        }
        psum += a.prob;
    }
    if (std::fabs(psum - 1.0) > 1e-12) {
        throw std::invalid_argument("check_entropy_inequality: probabilities must sum to 1");
    }
    CheckReport r;
    r.check_name = "entropy_inequality";
    r.tolerance = kExactTol;
    MarginTracker tracker{r};
    double ey2 = 0.0;
    for (const Atom& a : dist.atoms) ey2 += a.prob * a.value * a.value;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("check_entropy_inequality: t grid must be > 0");
        double tilted_mean = 0.0;
        double mgf = 0.0;
        for (const Atom& a : dist.atoms) {
            const double e = std::exp(t * a.value);
            tilted_mean += a.prob * t * a.value * e;
            mgf += a.prob * e;
        }
        const double lhs = tilted_mean - mgf * std::log(mgf);
        const double rhs = ey2 * (1.0 + (t - 1.0) * std::exp(t));
        tracker.note(rhs - lhs, [&] { return "t=" + fmt(t); });
    }
    std::ostringstream dom;
    dom << dist.atoms.size() << "-atom distribution (mean " << fmt(dist.mean()) << ", E Y^2 "
        << fmt(ey2) << "); " << grid_text(t_grid, "t");
    r.domain = dom.str();
    return r;
}

std::vector<CoordinateDist> entropy_test_battery() {
    std::vector<CoordinateDist> out;
    out.push_back(symmetric_sign());
    out.push_back(CoordinateDist{{{1.0, 1.0 / 3.0}, {-0.5, 2.0 / 3.0}}});
    // Centered two-atom grids: positive atom a, negative atom b, p chosen so
    // that p a + (1-p) b = 0.
    for (double a : {0.2, 0.5, 0.8, 1.0}) {
        for (double b : {-0.2, -0.5, -0.8, -1.0}) {
            const double p = -b / (a - b);
            out.push_back(CoordinateDist{{{a, p}, {b, 1.0 - p}}});
        }
    }
    // A few deliberately uncentered ones; the inequality does not need centering.
    out.push_back(CoordinateDist{{{0.7, 0.5}, {-0.1, 0.5}}});
    out.push_back(CoordinateDist{{{1.0, 0.25}, {0.5, 0.75}}});
    out.push_back(CoordinateDist{{{-0.9, 0.6}, {-0.2, 0.4}}});
    return out;
}

CheckReport check_legendre_conjugate(const std::vector<double>& x_grid) {
    CheckReport r;
    r.check_name = "legendre_conjugate";
    r.tolerance = 0.0;
    MarginTracker tracker{r};
    for (double x : x_grid) {
        if (!(x >= 0.0 && x <= 50.0)) {
            throw std::invalid_argument("check_legendre_conjugate: x grid must lie in [0, 50]");
        }
        const auto mn = minimize_scalar(
            [x](double t) { return t * t / (2.0 - 3.0 * t) - t * x; }, 0.0,
            2.0 / 3.0 - 1e-9, 1e-13, 4096);
        const double grid_sup = -mn.value;
        const double closed = subgamma_legendre(x);
        tracker.note(1e-8 - std::fabs(grid_sup - closed),
                     [&] { return "conjugate x=" + fmt(x); });
        for (double v : {0.5, 1.0, 2.0, 5.0}) {
            const double tight = upper_tail_bound(x, BoundParams{0.0, v}, TailForm::CTight);
            const double via_legendre = std::exp(-v * subgamma_legendre(x / v));
            tracker.note(1e-12 - std::fabs(tight - via_legendre),
                         [&] { return "tail identity x=" + fmt(x) + " v=" + fmt(v); });
        }
    }
    r.domain = "grid-search conjugate of t^2/(2-3t) vs closed form (tolerance 1e-8); "
               "Chernoff tail identity at v in {0.5, 1, 2, 5} (tolerance 1e-12); " +
               grid_text(x_grid, "x");
    return r;
}

CheckReport check_root_intervals() {
    CheckReport r;
    r.check_name = "root_intervals";
    r.tolerance = 0.0;
    MarginTracker tracker{r};
    const double root_phi = phi_unit_root();
    const double root_cross = bennett_crossing_root();
    tracker.note(root_phi - 0.46, [] { return std::string("phi root >= 0.46"); });
    tracker.note(0.47 - root_phi, [] { return std::string("phi root <= 0.47"); });
    tracker.note(1e-12 - std::fabs(phi(root_phi) - 1.0),
                 [] { return std::string("phi root residual"); });
    tracker.note(root_cross - 0.76, [] { return std::string("crossing root >= 0.76"); });
    tracker.note(0.77 - root_cross, [] { return std::string("crossing root <= 0.77"); });
    tracker.note(1e-12 - std::fabs(std::expm1(root_cross) - 1.5 * root_cross),
                 [] { return std::string("crossing root residual"); });
    tracker.note(root_cross - root_phi, [] { return std::string("crossing root > phi root"); });
    r.domain = "phi_root=" + fmt(root_phi) + ", crossing_root=" + fmt(root_cross);
    return r;
}

} // namespace epbound
