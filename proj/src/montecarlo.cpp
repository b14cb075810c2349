#include "epbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/beta.hpp>

namespace epbound {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t coordinate) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ trial);
    h = mix64(h ^ coordinate);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace {

double sample_into(const Scenario& s, std::uint64_t seed, std::uint64_t trial,
                   std::vector<double>& sums) {
    const std::size_t n = s.n();
    const std::size_t m = s.m();
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& atoms = s.coords[k].atoms;
        const double u = uniform01(seed, trial, k);
        std::size_t a = atoms.size() - 1;
        double cum = 0.0;
        for (std::size_t j = 0; j + 1 < atoms.size(); ++j) {
            cum += atoms[j].prob;
            if (u < cum) {
                a = j;
                break;
            }
        }
        for (std::size_t i = 0; i < m; ++i) sums[i] += s.values[i][k][a];
    }
    return *std::max_element(sums.begin(), sums.end());
}

} // namespace

double sample_supremum(const Scenario& s, std::uint64_t seed, std::uint64_t trial) {
    if (s.m() == 0) throw std::invalid_argument("sample_supremum: scenario has no functions");
    std::vector<double> scratch(s.m());
    return sample_into(s, seed, trial, scratch);
}

double binomial_lcb(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("binomial_lcb: trials must be >= 1");
    if (successes == 0) return 0.0;
    if (successes > trials) throw std::invalid_argument("binomial_lcb: successes > trials");
    const double n = static_cast<double>(trials);
    const double k = static_cast<double>(successes);
    if (successes >= 50) {
        const double p = k / n;
        return std::max(0.0, p - 3.0 * std::sqrt(p * (1.0 - p) / n));
    }
    // Clopper-Pearson lower limit at the one-sided level matching 3 sigma.
    const double alpha = 0.5 * std::erfc(3.0 / std::sqrt(2.0));
    boost::math::beta_distribution<double> beta(k, n - k + 1.0);
    return boost::math::quantile(beta, alpha);
}

SimResult estimate_stats(const Scenario& s, std::uint64_t trials, std::uint64_t seed,
                         const std::vector<double>& thresholds, unsigned workers) {
    if (trials < 1) throw std::invalid_argument("estimate_stats: trials must be >= 1");
    if (s.m() == 0) throw std::invalid_argument("estimate_stats: scenario has no functions");

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

    std::vector<double> draws(trials);
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                std::vector<double> scratch(s.m());
                for (std::uint64_t t = lo; t < hi; ++t) {
                    draws[t] = sample_into(s, seed, t, scratch);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Reduction is sequential over trial order, so the result does not depend
    // on how the draws were partitioned.
    SimResult r;
    r.trials = trials;
    r.seed = seed;
    const double n = static_cast<double>(trials);
    double sum = 0.0;
    for (double d : draws) sum += d;
    r.mean_z = sum / n;

    double m2 = 0.0;
    double m4 = 0.0;
    for (double d : draws) {
        const double c = d - r.mean_z;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    if (trials >= 2) {
        r.var_z = m2 / (n - 1.0);
        m4 /= n;
        r.se_mean = std::sqrt(r.var_z / n);
        const double var_of_var = std::max(0.0, m4 - r.var_z * r.var_z);
        r.se_var = std::sqrt(var_of_var / n);
        r.se_defined = true;
    }

    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    r.median_z = trials % 2 == 1 ? sorted[trials / 2]
                                 : 0.5 * (sorted[trials / 2 - 1] + sorted[trials / 2]);
    if (trials >= 2) {
        const double half_band = 1.5 * std::sqrt(n);
        const auto lo_rank = static_cast<std::uint64_t>(
            std::max(0.0, std::floor(n / 2.0 - half_band)));
        const auto hi_rank = static_cast<std::uint64_t>(
            std::min(n - 1.0, std::ceil(n / 2.0 + half_band)));
        r.se_median = (sorted[hi_rank] - sorted[lo_rank]) / 6.0;
    }

    r.tails.reserve(thresholds.size());
    for (double thr : thresholds) {
        TailFrequency tf;
        tf.threshold = thr;
        const auto lb = std::lower_bound(sorted.begin(), sorted.end(), thr);
        const auto ub = std::upper_bound(sorted.begin(), sorted.end(), thr);
        tf.count_ge = static_cast<std::uint64_t>(sorted.end() - lb);
        tf.count_le = static_cast<std::uint64_t>(ub - sorted.begin());
        tf.freq_ge = static_cast<double>(tf.count_ge) / n;
        tf.freq_le = static_cast<double>(tf.count_le) / n;
        tf.lcb_ge = binomial_lcb(tf.count_ge, trials);
        tf.lcb_le = binomial_lcb(tf.count_le, trials);
        r.tails.push_back(tf);
    }
    return r;
}

} // namespace epbound
