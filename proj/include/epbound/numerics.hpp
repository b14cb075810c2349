#pragma once

#include <functional>

namespace epbound {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_subdivisions = 60;
};

// Adaptive Simpson integral of f over [a, b] to within spec.abs_tol.
// Throws std::runtime_error if the subdivision budget is exhausted.
double quadrature(const std::function<double(double)>& f, double a, double b,
                  const QuadratureSpec& spec = {});

// Root of f on [lo, hi]. Requires a sign change; the bracket is narrowed to
// width <= tol and the midpoint returned.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

// Coarse grid scan followed by golden-section refinement. Boundary minima are
// allowed; for convex objectives the result is the global minimizer.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol = 1e-12, int grid = 128);

// phi(u)/u with its limit value 1 at u = 0.
double phi_over_u(double u);

// u^{-2} (e^{2u}-1)(1 + (u-1)e^u) e^u with its limit value 0 at u = 0;
// series evaluation of 1 + (u-1)e^u below u = 1e-3.
double kernel_integrand(double u);

// I(t) = integral_0^t phi(u)/u du, with integrand value 1 at u = 0.
// Guarantees (t <= I(t) <= (e^{2t}-1)/2 - t^2/4) hold for t up to phi_unit_root();
// larger arguments are computed but carry no envelope guarantee.
double phi_integral(double t, const QuadratureSpec& spec = {});

// J(t) = 1/2 integral_0^t u^{-2} (e^{2u}-1)(1 + (u-1)e^u) e^u du, integrand 0 at
// u = 0. Domain 0 <= t <= 4; small-t behavior t^2/4 + O(t^3).
double kernel_integral(double t, const QuadratureSpec& spec = {});

// Positive root of phi(t) = 1, in [0.46, 0.47]. Computed once, cached.
double phi_unit_root();

// Positive root of e^t - t - 1 = t/2, in [0.76, 0.77]; exceeds phi_unit_root().
double bennett_crossing_root();

// Quadrature-backed bound on log E exp(-tZ) + t E(Z), valid for
// 0 <= t <= phi_unit_root():
//   t * mean_z * (1 - e^{-I(t)}) + v_n * (t e^{-t} J(t) + e^t - t - 1).
// Pointwise dominated by ((v_n + 2 mean_z)/9)(e^{3t} - 3t - 1).
double lower_log_laplace_refined(double t, double mean_z, double v_n);

} // namespace epbound
