#include "epbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epbound/numerics.hpp"

namespace epbound {

namespace {

constexpr double kMaxDouble = std::numeric_limits<double>::max();
// exp() overflows just above 709.78; stay on the safe side.
constexpr double kExpArgMax = 709.0;

void require_params(const BoundParams& p) {
    if (!(p.mean_z >= 0.0) || !(p.v_n >= 0.0)) {
        throw std::domain_error("BoundParams: mean_z and v_n must be >= 0");
    }
}

double require_positive_v(const BoundParams& p) {
    require_params(p);
    const double v = p.v();
    if (!(v > 0.0)) throw std::domain_error("tail bound: requires v = v_n + 2 mean_z > 0");
    return v;
}

} // namespace

BoundParams BoundParams::checked(double mean_z, double v_n) {
    BoundParams p{mean_z, v_n};
    require_params(p);
    return p;
}

double bennett_h(double x) {
    if (x < -1.0) throw std::domain_error("bennett_h: domain is [-1, inf)");
    if (x == -1.0) return 1.0; // limit value
    if (std::fabs(x) < 1e-4) {
        // (1+x)log(1+x) - x = x^2/2 - x^3/6 + x^4/12 - ...; direct evaluation
        // cancels catastrophically here.
        return x * x * (0.5 - x / 6.0 + x * x / 12.0);
    }
    return (1.0 + x) * std::log1p(x) - x;
}

double psi(double t) {
    if (!(t >= 0.0)) throw std::domain_error("psi: requires t >= 0");
    return 1.0 + 0.5 * std::expm1(2.0 * t);
}

double phi(double t) {
    if (!(t >= 0.0)) throw std::domain_error("phi: requires t >= 0");
    const double half = 0.5 * std::expm1(2.0 * t);
    return (1.0 + half) * std::log1p(half);
}

BoundEval upper_log_laplace_bound(double t, const BoundParams& p) {
    require_params(p);
    if (!(t >= 0.0)) throw std::domain_error("upper_log_laplace_bound: requires t >= 0");
    const double inner = 0.5 * std::expm1(2.0 * t); // (e^{2t}-1)/2
    if (!(inner < kExpArgMax)) return {kMaxDouble, true};
    const double value = t * p.mean_z + 0.5 * t * p.v() * std::expm1(inner);
    if (!std::isfinite(value)) return {kMaxDouble, true};
    return {value, false};
}

double subgamma_log_laplace_bound(double t, const BoundParams& p) {
    require_params(p);
    if (!(t >= 0.0) || t >= 2.0 / 3.0) {
        throw std::domain_error("subgamma_log_laplace_bound: domain is [0, 2/3)");
    }
    return t * p.mean_z + p.v() * t * t / (2.0 - 3.0 * t);
}

BoundEval lower_log_laplace_bound(double t, const BoundParams& p) {
    require_params(p);
    if (!(t >= 0.0)) throw std::domain_error("lower_log_laplace_bound: requires t >= 0");
    if (3.0 * t > kExpArgMax) return {kMaxDouble, true};
    const double value = (p.v() / 9.0) * (std::expm1(3.0 * t) - 3.0 * t);
    if (!std::isfinite(value)) return {kMaxDouble, true};
    return {value, false};
}

BoundEval bennett_log_laplace(double t, double mean_z, double V, double a, double b) {
    if (!(t >= 0.0)) throw std::domain_error("bennett_log_laplace: requires t >= 0");
    if (!(V >= 0.0)) throw std::domain_error("bennett_log_laplace: requires V >= 0");
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("bennett_log_laplace: requires a > 0 and b > 0");
    }
    if (b * t > kExpArgMax) return {kMaxDouble, true};
    const double value = t * mean_z + V * a / (b * b) * (std::expm1(b * t) - b * t);
    if (!std::isfinite(value)) return {kMaxDouble, true};
    return {value, false};
}

double upper_tail_bound(double x, const BoundParams& p, TailForm form) {
    const double v = require_positive_v(p);
    if (!(x >= 0.0)) throw std::domain_error("upper_tail_bound: requires x >= 0");
    switch (form) {
    case TailForm::B:
        return std::exp(-0.25 * x * std::log1p(2.0 * std::log1p(x / v)));
    case TailForm::CTight:
        return std::exp(-x * x / (v + std::sqrt(v * (v + 3.0 * x)) + 1.5 * x));
    case TailForm::CSimple:
        return std::exp(-x * x / (2.0 * v + 3.0 * x));
    }
    throw std::invalid_argument("upper_tail_bound: unknown form");
}

double lower_tail_bound(double x, const BoundParams& p, TailForm form) {
    const double v = require_positive_v(p);
    if (!(x >= 0.0)) throw std::domain_error("lower_tail_bound: requires x >= 0");
    switch (form) {
    case TailForm::B:
        return std::exp(-(v / 9.0) * bennett_h(3.0 * x / v));
    case TailForm::CTight:
        return std::exp(-x * x / (v + std::sqrt(v * (v + 2.0 * x)) + x));
    case TailForm::CSimple:
        return std::exp(-x * x / (2.0 * v + 2.0 * x));
    }
    throw std::invalid_argument("lower_tail_bound: unknown form");
}

double tail_bound(double x, const BoundParams& p, TailForm form, Side side) {
    return side == Side::Upper ? upper_tail_bound(x, p, form) : lower_tail_bound(x, p, form);
}

double rademacher_tail_bound(double x, double v_n) {
    if (!(v_n > 0.0)) throw std::domain_error("rademacher_tail_bound: requires v_n > 0");
    if (!(x >= 0.0)) throw std::domain_error("rademacher_tail_bound: requires x >= 0");
    return std::exp(-x * x / (8.0 * v_n));
}

double subgamma_legendre(double x) {
    if (!(x >= 0.0)) throw std::domain_error("subgamma_legendre: requires x >= 0");
    return x * x / (1.0 + 1.5 * x + std::sqrt(1.0 + 3.0 * x));
}

double variance_upper_bound(double v_n, double mean_z) {
    if (!(v_n >= 0.0) || !(mean_z >= 0.0)) {
        throw std::domain_error("variance_upper_bound: arguments must be >= 0");
    }
    return v_n + 2.0 * mean_z;
}

ChernoffTail chernoff_optimized_tail(double x, const BoundParams& p, Side side) {
    const double v = require_positive_v(p);
    if (!(x >= 0.0)) throw std::domain_error("chernoff_optimized_tail: requires x >= 0");
    if (x == 0.0) return {1.0, 0.0};

    // E(Z) cancels between the log-Laplace bound and the Markov threshold, so
    // only the variance part of the objective remains.
    std::function<double(double)> objective;
    double t_cap;
    double seed_main;  // the t whose bound equals the closed B form
    double seed_tight; // the optimizer of the matching sub-gamma form
    const double ratio = x / v;
    if (side == Side::Upper) {
        objective = [v, x](double t) {
            const double inner = 0.5 * std::expm1(2.0 * t);
            if (!(inner < kExpArgMax)) return kMaxDouble;
            return 0.5 * t * v * std::expm1(inner) - t * x;
        };
        t_cap = 0.5 * std::log1p(2.0 * kExpArgMax);
        seed_main = 0.5 * std::log1p(2.0 * std::log1p(ratio));
        seed_tight = (2.0 - 2.0 / std::sqrt(1.0 + 3.0 * ratio)) / 3.0;
    } else {
        objective = [v, x](double t) {
            if (3.0 * t > kExpArgMax) return kMaxDouble;
            return (v / 9.0) * (std::expm1(3.0 * t) - 3.0 * t) - t * x;
        };
        t_cap = kExpArgMax / 3.0;
        seed_main = std::log1p(3.0 * ratio) / 3.0;
        seed_tight = 1.0 - 1.0 / std::sqrt(1.0 + 2.0 * ratio);
    }

    const double hi = std::min(t_cap, std::max(1.0, 4.0 * seed_main));
    ScalarMinimum best = minimize_scalar(objective, 1e-12, hi, 1e-12, 256);
    for (double seed : {seed_main, seed_tight}) {
        seed = std::clamp(seed, 1e-300, t_cap);
        const double fs = objective(seed);
        if (fs < best.value) best = {seed, fs};
    }
    return {std::min(1.0, std::exp(best.value)), best.x};
}

double invert_tail_bound(double delta, const BoundParams& p, TailForm form, Side side) {
    const double v = require_positive_v(p);
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("invert_tail_bound: delta must lie in (0, 1)");
    }
    if (form == TailForm::CSimple) {
        // exp(-x^2/(2v + cx)) = delta  =>  x^2 - cLx - 2vL = 0, L = log(1/delta).
        const double L = -std::log(delta);
        const double c = side == Side::Upper ? 3.0 : 2.0;
        return 0.5 * (c * L + std::sqrt(c * c * L * L + 8.0 * v * L));
    }
    auto bound_at = [&](double x) { return tail_bound(x, p, form, side); };
    double lo = 0.0;
    double hi = v;
    int grow = 0;
    while (bound_at(hi) >= delta) {
        hi *= 2.0;
        if (++grow > 4000) {
            throw std::runtime_error("invert_tail_bound: bracket growth failed");
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (bound_at(mid) >= delta) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace epbound
