#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epbound {

struct Atom {
    double value = 0.0; // in [-1, 1]
    double prob = 0.0;  // in (0, 1]
};

struct CoordinateDist {
    std::vector<Atom> atoms;

    double mean() const;
    double second_moment() const;
    double variance() const;
};

// {-1, +1} with probability 1/2 each.
CoordinateDist symmetric_sign();

// A finite class of m functions over n independent discrete coordinates.
// values[i][k][a] is the value of function i at atom a of coordinate k; the
// process is S(i) = sum_k values[i][k][atom_k] and Z = max_i S(i).
struct Scenario {
    std::vector<CoordinateDist> coords;
    std::vector<std::vector<std::vector<double>>> values;

    std::size_t n() const { return coords.size(); }
    std::size_t m() const { return values.size(); }
};

struct Violation {
    std::string location;
    std::string message;
};

// Scenario with s_i^k(x) = x * zeta[i][k]. Coordinates default to symmetric
// signs; every coordinate must be centered and |zeta * atom value| <= 1.
Scenario build_rademacher(const std::vector<std::vector<double>>& zeta,
                          std::vector<CoordinateDist> coords = {});

// Set-indexed scenario: one function per set S with
// s^k(x) = 1_{x in S} - P(X_k in S); automatically centered.
Scenario build_set_indexed(std::size_t space_size,
                           const std::vector<std::vector<double>>& coord_probs,
                           const std::vector<std::vector<std::size_t>>& sets);

// Structural checks only (shapes align, probabilities valid); centering and
// range of the function tables are reported by validate(), not enforced here.
Scenario build_general(std::vector<CoordinateDist> coords,
                       std::vector<std::vector<std::vector<double>>> values);

// Empty iff every function/coordinate pair is centered within 1e-10 and all
// table values lie in [-1, 1]. Violations are data, never silently fixed.
std::vector<Violation> validate(const Scenario& s);

// One-line description used in reports ("rademacher-like" is not recovered;
// reports the shape only).
std::string scenario_summary(const Scenario& s);

// V_n: max over functions of sum_k Var(s_i^k(X_k)), exact from the atoms.
double max_variance(const Scenario& s);

inline constexpr std::uint64_t kDefaultEnumerationCap = 20'000'000;

class EnumerationCapError : public std::runtime_error {
  public:
    EnumerationCapError(std::uint64_t required, std::uint64_t cap);
    std::uint64_t required() const { return required_; }
    std::uint64_t cap() const { return cap_; }

  private:
    std::uint64_t required_;
    std::uint64_t cap_;
};

// Product of coordinate support sizes, saturating at UINT64_MAX.
std::uint64_t outcome_count(const Scenario& s);

// Largest attainable Z = max_i sum_k max_a values[i][k][a]; no enumeration.
double max_supremum(const Scenario& s);

// Exact distribution of Z obtained by enumerating the product space.
struct ExactSummary {
    double mean_z = 0.0;
    double var_z = 0.0;
    double median_z = 0.0;
    std::size_t support_size = 0;
    // Ascending distinct Z values with exact probabilities, plus aligned
    // prefix (P(Z <= z_j)) and suffix (P(Z >= z_j)) sums.
    std::vector<std::pair<double, double>> distribution;
    std::vector<double> prefix_prob;
    std::vector<double> suffix_prob;
    // P(Z >= threshold) at the thresholds requested from enumerate_exact.
    std::vector<std::pair<double, double>> tail;

    double prob_at_least(double z) const;
    double prob_at_most(double z) const;
    double log_mgf(double t) const; // log E exp(tZ)
    double min_z() const;
    double max_z() const;
};

ExactSummary enumerate_exact(const Scenario& s, const std::vector<double>& thresholds = {},
                             std::uint64_t cap = kDefaultEnumerationCap);

// Talagrand's factor V = E(max_i sum_k s_i^k(X_k)^2); enumerates, so the same
// cap applies. Satisfies V_n <= V <= V_n + 16 E(Z).
double talagrand_variance(const Scenario& s, std::uint64_t cap = kDefaultEnumerationCap);

} // namespace epbound
