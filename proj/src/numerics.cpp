#include "epbound/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "epbound/bounds.hpp"

namespace epbound {

namespace {

double simpson(double fa, double fm, double fb, double width) {
    return width * (fa + 4.0 * fm + fb) / 6.0;
}

double adapt(const std::function<double(double)>& f, double a, double fa, double m, double fm,
             double b, double fb, double whole, double tol, int depth, int max_depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    // Second clause: the refinement has hit the rounding floor of the local
    // integral; splitting further only chases noise.
    if (std::fabs(delta) <= 15.0 * tol ||
        std::fabs(delta) <= 4.4e-16 * (std::fabs(left) + std::fabs(right))) {
        return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
        throw std::runtime_error("quadrature: subdivision budget exhausted before reaching "
                                 "the requested tolerance");
    }
    return adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double quadrature(const std::function<double(double)>& f, double a, double b,
                  const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0)) throw std::invalid_argument("quadrature: abs_tol must be > 0");
    if (spec.max_subdivisions < 1)
        throw std::invalid_argument("quadrature: max_subdivisions must be >= 1");
    if (!(a <= b)) throw std::invalid_argument("quadrature: requires a <= b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adapt(f, a, fa, m, fm, b, fb, whole, spec.abs_tol, 0, spec.max_subdivisions);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("bisect: tol must be > 0");
    if (!(lo <= hi)) throw std::invalid_argument("bisect: requires lo <= hi");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw std::invalid_argument("bisect: no sign change on the bracket");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol, int grid) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: requires lo < hi");
    if (grid < 2) grid = 2;

    double best_x = lo;
    double best_f = f(lo);
    int best_i = 0;
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / grid;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            best_i = i;
        }
    }

    // Golden-section refinement on the bracketing neighbours.
    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best_i - 1)) / grid;
    double b = lo + (hi - lo) * static_cast<double>(std::min(grid, best_i + 1)) / grid;
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    ScalarMinimum result{xm, fm};
    if (fc < result.value) result = {c, fc};
    if (fd < result.value) result = {d, fd};
    if (best_f < result.value) result = {best_x, best_f};
    return result;
}

double phi_over_u(double u) {
    if (u == 0.0) return 1.0;
    // psi(u) * log(psi(u)) / u via expm1/log1p; smooth down to u -> 0.
    const double half = 0.5 * std::expm1(2.0 * u);
    return (1.0 + half) * std::log1p(half) / u;
}

double kernel_integrand(double u) {
    if (u == 0.0) return 0.0;
    // 1 + (u-1)e^u = sum_{j>=2} (j-1) u^j / j!; series below u = 1e-3.
    const double core = (u < 1e-3) ? u * u * (0.5 + u / 3.0 + u * u / 8.0 + u * u * u / 30.0)
                                   : 1.0 + (u - 1.0) * std::exp(u);
    return std::expm1(2.0 * u) * core * std::exp(u) / (u * u);
}

double phi_integral(double t, const QuadratureSpec& spec) {
    if (!(t >= 0.0)) throw std::domain_error("phi_integral: requires t >= 0");
    if (t == 0.0) return 0.0;
    return quadrature(phi_over_u, 0.0, t, spec);
}

double kernel_integral(double t, const QuadratureSpec& spec) {
    if (!(t >= 0.0 && t <= 4.0)) throw std::domain_error("kernel_integral: domain is [0, 4]");
    if (t == 0.0) return 0.0;
    return 0.5 * quadrature(kernel_integrand, 0.0, t, spec);
}

double phi_unit_root() {
    static const double root =
        bisect([](double t) { return phi(t) - 1.0; }, 0.4, 0.5, 1e-14);
    return root;
}

double bennett_crossing_root() {
    static const double root = [] {
        const double r = bisect([](double t) { return std::expm1(t) - 1.5 * t; }, 0.7, 0.8, 1e-14);
        if (!(r > phi_unit_root())) {
            throw std::logic_error("bennett_crossing_root: expected to exceed phi_unit_root");
        }
        return r;
    }();
    return root;
}

double lower_log_laplace_refined(double t, double mean_z, double v_n) {
    if (!(mean_z >= 0.0) || !(v_n >= 0.0)) {
        throw std::domain_error("lower_log_laplace_refined: mean_z and v_n must be >= 0");
    }
    if (!(t >= 0.0) || t > phi_unit_root()) {
        throw std::domain_error("lower_log_laplace_refined: domain is [0, phi_unit_root()]");
    }
    if (t == 0.0) return 0.0;
    const double mean_term = t * mean_z * (-std::expm1(-phi_integral(t)));
    const double var_term = v_n * (t * std::exp(-t) * kernel_integral(t) + std::expm1(t) - t);
    return mean_term + var_term;
}

} // namespace epbound
