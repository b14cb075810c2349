#pragma once

#include <cstdint>
#include <vector>

#include "epbound/scenario.hpp"

namespace epbound {

// SplitMix64 finalizer. Draws below are pure functions of
// (seed, trial, coordinate), so results are independent of scheduling,
// worker count and evaluation order.
std::uint64_t mix64(std::uint64_t x);
double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t coordinate);

// One draw of Z = max_i sum_k s_i^k(X_k).
double sample_supremum(const Scenario& s, std::uint64_t seed, std::uint64_t trial);

// One-sided lower confidence bound on a binomial proportion at the 3-sigma
// level: normal approximation for >= 50 successes, exact Clopper-Pearson below.
double binomial_lcb(std::uint64_t successes, std::uint64_t trials);

struct TailFrequency {
    double threshold = 0.0;
    std::uint64_t count_ge = 0;
    std::uint64_t count_le = 0;
    double freq_ge = 0.0;
    double freq_le = 0.0;
    double lcb_ge = 0.0; // one-sided lower confidence bound on P(Z >= threshold)
    double lcb_le = 0.0; // one-sided lower confidence bound on P(Z <= threshold)
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_z = 0.0;
    double var_z = 0.0;    // sample variance (n-1 denominator); 0 when trials < 2
    double median_z = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;
    double se_median = 0.0; // order-statistic band width / 6 (3-sigma band)
    bool se_defined = false;
    std::vector<TailFrequency> tails;
};

// Monte Carlo estimates over `trials` draws. Workers only partition the trial
// indices; draws are written into a per-trial buffer and reduced sequentially,
// so every statistic is byte-identical for any worker count (0 = hardware).
SimResult estimate_stats(const Scenario& s, std::uint64_t trials, std::uint64_t seed,
                         const std::vector<double>& thresholds = {}, unsigned workers = 0);

} // namespace epbound
