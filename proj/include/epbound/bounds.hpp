#pragma once

namespace epbound {

// Parameters shared by every bound: the process mean E(Z) and the maximal
// variance v_n, with the derived variance factor v = v_n + 2 E(Z).
struct BoundParams {
    double mean_z = 0.0; // E(Z), >= 0
    double v_n = 0.0;    // maximal variance, >= 0

    double v() const { return v_n + 2.0 * mean_z; }

    // Validating constructor helper; throws std::domain_error on negatives.
    static BoundParams checked(double mean_z, double v_n);
};

// The three tail-bound shapes available per side.
//   B:       upper exp(-(x/4) log(1 + 2 log(1 + x/v)));  lower exp(-(v/9) h(3x/v))
//   CTight:  upper exp(-x^2/(v + sqrt(v^2+3vx) + 3x/2)); lower exp(-x^2/(v + sqrt(v^2+2vx) + x))
//   CSimple: upper exp(-x^2/(2v + 3x));                  lower exp(-x^2/(2v + 2x))
// CTight <= CSimple at every x > 0, v > 0.
enum class TailForm { B, CTight, CSimple };

enum class Side { Upper, Lower };

// Result of a log-Laplace bound evaluation. When an intermediate exponential
// exceeds double range the value is clamped to the largest finite double and
// flagged, never returned as a silent infinity.
struct BoundEval {
    double value = 0.0;
    bool saturated = false;
};

// h(x) = (1+x) log(1+x) - x, the Bennett rate function. Domain x >= -1
// (limit value 1 at x = -1); series evaluation below |x| = 1e-4.
double bennett_h(double x);

// psi(t) = (e^{2t} + 1)/2 and phi(t) = psi(t) log psi(t), t >= 0.
double psi(double t);
double phi(double t);

// t E(Z) + (t/2) v (exp((e^{2t}-1)/2) - 1), the double-exponential bound on
// log E exp(tZ) for t >= 0.
BoundEval upper_log_laplace_bound(double t, const BoundParams& p);

// t E(Z) + v t^2/(2-3t), the sub-gamma bound on log E exp(tZ) for
// 0 <= t < 2/3. Dominates upper_log_laplace_bound on its domain.
double subgamma_log_laplace_bound(double t, const BoundParams& p);

// (v/9)(e^{3t} - 3t - 1), bounding log E exp(-tZ) + t E(Z) for t >= 0.
BoundEval lower_log_laplace_bound(double t, const BoundParams& p);

// t mean_z + V a b^{-2} (e^{bt} - bt - 1), the generic Bennett-type bound on
// log E exp(tZ) with variance factor V and constants a, b > 0.
BoundEval bennett_log_laplace(double t, double mean_z, double V, double a, double b);

// P(Z >= E(Z) + x) bounds, x >= 0, v > 0.
double upper_tail_bound(double x, const BoundParams& p, TailForm form);
// P(Z <= E(Z) - x) bounds, x >= 0, v > 0.
double lower_tail_bound(double x, const BoundParams& p, TailForm form);
double tail_bound(double x, const BoundParams& p, TailForm form, Side side);

// exp(-x^2/(8 v_n)): deviation above a *median* for Rademacher processes.
// Comparison tables only; not centered at the mean like the other bounds.
double rademacher_tail_bound(double x, double v_n);

// Legendre transform of t -> t^2/(2-3t):
// (4/9)(1 + 3x/2 - sqrt(1+3x)), rationalized as x^2/(1 + 3x/2 + sqrt(1+3x))
// to avoid cancellation near 0.
double subgamma_legendre(double x);

// Var Z <= v_n + 2 mean_z.
double variance_upper_bound(double v_n, double mean_z);

struct ChernoffTail {
    double bound = 1.0;
    double t_star = 0.0;
};

// inf over t > 0 of the exponential Markov bound built from the side's
// log-Laplace bound; never exceeds the closed-form bounds of the same side.
ChernoffTail chernoff_optimized_tail(double x, const BoundParams& p, Side side);

// The unique x >= 0 with tail_bound(x) = delta. Closed quadratic for CSimple,
// bracketed bisection otherwise; round-trip error below 1e-10.
double invert_tail_bound(double delta, const BoundParams& p, TailForm form, Side side);

} // namespace epbound
