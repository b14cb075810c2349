#include "epbound/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace epbound {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kCenteringTol = 1e-10;

void check_coordinate(const CoordinateDist& c, const std::string& where) {
    if (c.atoms.empty()) throw std::invalid_argument(where + ": coordinate has no atoms");
    double sum = 0.0;
    for (const Atom& a : c.atoms) {
        if (!(a.prob > 0.0 && a.prob <= 1.0)) {
            throw std::invalid_argument(where + ": atom probability must lie in (0, 1]");
        }
        if (!(a.value >= -1.0 && a.value <= 1.0)) {
            throw std::invalid_argument(where + ": atom value must lie in [-1, 1]");
        }
        sum += a.prob;
    }
    if (std::fabs(sum - 1.0) > kProbSumTol) {
        throw std::invalid_argument(where + ": atom probabilities must sum to 1");
    }
}

std::string ik_location(std::size_t i, std::size_t k) {
    std::ostringstream os;
    os << "(i=" << i + 1 << ",k=" << k + 1 << ")";
    return os.str();
}

} // namespace

double CoordinateDist::mean() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.prob * a.value;
    return s;
}

double CoordinateDist::second_moment() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.prob * a.value * a.value;
    return s;
}

double CoordinateDist::variance() const {
    const double m = mean();
    return second_moment() - m * m;
}

CoordinateDist symmetric_sign() {
    return CoordinateDist{{{-1.0, 0.5}, {1.0, 0.5}}};
}

Scenario build_rademacher(const std::vector<std::vector<double>>& zeta,
                          std::vector<CoordinateDist> coords) {
    if (zeta.empty() || zeta.front().empty()) {
        throw std::invalid_argument("build_rademacher: zeta must be a nonempty m x n matrix");
    }
    const std::size_t m = zeta.size();
    const std::size_t n = zeta.front().size();
    for (const auto& row : zeta) {
        if (row.size() != n) {
            throw std::invalid_argument("build_rademacher: zeta rows must have equal length");
        }
    }
    if (coords.empty()) coords.assign(n, symmetric_sign());
    if (coords.size() != n) {
        throw std::invalid_argument("build_rademacher: coordinate count must match zeta width");
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::ostringstream os;
        os << "coordinate " << k + 1;
        check_coordinate(coords[k], os.str());
        if (std::fabs(coords[k].mean()) > kCenteringTol) {
            throw std::invalid_argument(os.str() + ": coordinate distribution is not centered");
        }
    }

    Scenario s;
    s.coords = std::move(coords);
    s.values.assign(m, std::vector<std::vector<double>>(n));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            auto& col = s.values[i][k];
            col.reserve(s.coords[k].atoms.size());
            for (const Atom& a : s.coords[k].atoms) {
                const double val = zeta[i][k] * a.value;
                if (std::fabs(val) > 1.0) {
                    throw std::invalid_argument("build_rademacher: |zeta * value| > 1 at " +
                                                ik_location(i, k));
                }
                col.push_back(val);
            }
        }
    }
    return s;
}

Scenario build_set_indexed(std::size_t space_size,
                           const std::vector<std::vector<double>>& coord_probs,
                           const std::vector<std::vector<std::size_t>>& sets) {
    if (space_size == 0) throw std::invalid_argument("build_set_indexed: space_size must be >= 1");
    if (coord_probs.empty()) {
        throw std::invalid_argument("build_set_indexed: needs at least one coordinate");
    }
    if (sets.empty()) throw std::invalid_argument("build_set_indexed: empty set collection");

    const std::size_t n = coord_probs.size();
    Scenario s;
    s.coords.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& probs = coord_probs[k];
        std::ostringstream os;
        os << "coordinate " << k + 1;
        if (probs.size() != space_size) {
            throw std::invalid_argument(os.str() + ": probability vector length must equal "
                                                   "space_size");
        }
        CoordinateDist dist;
        double sum = 0.0;
        for (std::size_t j = 0; j < space_size; ++j) {
            if (!(probs[j] > 0.0 && probs[j] <= 1.0)) {
                throw std::invalid_argument(os.str() + ": malformed probability vector");
            }
            sum += probs[j];
            // The abstract space point j; its numeric label is only used to keep
            // atom values inside [-1, 1].
            const double label =
                space_size == 1 ? 0.0
                                : -1.0 + 2.0 * static_cast<double>(j) /
                                             static_cast<double>(space_size - 1);
            dist.atoms.push_back({label, probs[j]});
        }
        if (std::fabs(sum - 1.0) > kProbSumTol) {
            throw std::invalid_argument(os.str() + ": malformed probability vector");
        }
        s.coords.push_back(std::move(dist));
    }

    s.values.assign(sets.size(), std::vector<std::vector<double>>(n));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<bool> member(space_size, false);
        for (std::size_t j : sets[i]) {
            if (j >= space_size) {
                std::ostringstream os;
                os << "set " << i + 1 << ": index " << j << " outside the space";
                throw std::invalid_argument(os.str());
            }
            member[j] = true;
        }
        for (std::size_t k = 0; k < n; ++k) {
            double p = 0.0;
            for (std::size_t j = 0; j < space_size; ++j) {
                if (member[j]) p += coord_probs[k][j];
            }
            auto& col = s.values[i][k];
            col.reserve(space_size);
            for (std::size_t j = 0; j < space_size; ++j) {
                col.push_back((member[j] ? 1.0 : 0.0) - p);
            }
        }
    }
    return s;
}

Scenario build_general(std::vector<CoordinateDist> coords,
                       std::vector<std::vector<std::vector<double>>> values) {
    if (coords.empty()) throw std::invalid_argument("build_general: needs at least one coordinate");
    if (values.empty()) throw std::invalid_argument("build_general: needs at least one function");
    const std::size_t n = coords.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::ostringstream os;
        os << "coordinate " << k + 1;
        check_coordinate(coords[k], os.str());
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != n) {
            throw std::invalid_argument("build_general: function " + std::to_string(i + 1) +
                                        " must have one value list per coordinate");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (values[i][k].size() != coords[k].atoms.size()) {
                throw std::invalid_argument("build_general: value list at " + ik_location(i, k) +
                                            " must align with the atom list");
            }
        }
    }
    Scenario s;
    s.coords = std::move(coords);
    s.values = std::move(values);
    return s;
}

std::vector<Violation> validate(const Scenario& s) {
    std::vector<Violation> out;
    for (std::size_t k = 0; k < s.n(); ++k) {
        std::ostringstream loc;
        loc << "coordinate " << k + 1;
        double sum = 0.0;
        for (const Atom& a : s.coords[k].atoms) {
            sum += a.prob;
            if (!(a.prob > 0.0 && a.prob <= 1.0)) {
                out.push_back({loc.str(), "atom probability outside (0, 1]"});
            }
            if (!(a.value >= -1.0 && a.value <= 1.0)) {
                out.push_back({loc.str(), "atom value outside [-1, 1]"});
            }
        }
        if (std::fabs(sum - 1.0) > kProbSumTol) {
            out.push_back({loc.str(), "atom probabilities do not sum to 1"});
        }
    }
    for (std::size_t i = 0; i < s.m(); ++i) {
        if (s.values[i].size() != s.n()) {
            std::ostringstream os;
            os << "function " << i + 1;
            out.push_back({os.str(), "value table does not have one list per coordinate"});
            continue;
        }
        for (std::size_t k = 0; k < s.n(); ++k) {
            const auto& col = s.values[i][k];
            const auto& atoms = s.coords[k].atoms;
            if (col.size() != atoms.size()) {
                out.push_back({ik_location(i, k), "value list does not align with the atoms"});
                continue;
            }
            double mean = 0.0;
            bool in_range = true;
            for (std::size_t a = 0; a < col.size(); ++a) {
                mean += atoms[a].prob * col[a];
                if (!(col[a] >= -1.0 && col[a] <= 1.0)) in_range = false;
            }
            if (!in_range) {
                out.push_back({ik_location(i, k), "function value outside [-1, 1]"});
            }
            if (std::fabs(mean) > kCenteringTol) {
                std::ostringstream os;
                os << "E(s^k(X_k)) = " << mean << " is not 0";
                out.push_back({ik_location(i, k), os.str()});
            }
        }
    }
    return out;
}

std::string scenario_summary(const Scenario& s) {
    std::size_t max_atoms = 0;
    for (const auto& c : s.coords) max_atoms = std::max(max_atoms, c.atoms.size());
    std::ostringstream os;
    os << "scenario m=" << s.m() << " n=" << s.n() << " atoms<=" << max_atoms;
    return os.str();
}

double max_variance(const Scenario& s) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.m(); ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < s.n(); ++k) {
            const auto& atoms = s.coords[k].atoms;
            const auto& col = s.values[i][k];
            double m1 = 0.0;
            double m2 = 0.0;
            for (std::size_t a = 0; a < atoms.size(); ++a) {
                m1 += atoms[a].prob * col[a];
                m2 += atoms[a].prob * col[a] * col[a];
            }
            total += m2 - m1 * m1;
        }
        best = std::max(best, total);
    }
    return best;
}

EnumerationCapError::EnumerationCapError(std::uint64_t required, std::uint64_t cap)
    : std::runtime_error("enumeration needs " + std::to_string(required) +
                         " outcomes, above the cap of " + std::to_string(cap)),
      required_(required),
      cap_(cap) {}

std::uint64_t outcome_count(const Scenario& s) {
    std::uint64_t total = 1;
    for (const auto& c : s.coords) {
        const std::uint64_t sz = c.atoms.size();
        if (sz == 0) return 0;
        if (total > std::numeric_limits<std::uint64_t>::max() / sz) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= sz;
    }
    return total;
}

double max_supremum(const Scenario& s) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.m(); ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < s.n(); ++k) {
            const auto& col = s.values[i][k];
            total += *std::max_element(col.begin(), col.end());
        }
        best = std::max(best, total);
    }
    return best;
}

namespace {

// Streams every outcome of the product space: visit(prob, per_function_sums).
// Level buffers avoid undo-rounding; no outcome list is materialized.
template <class Visitor>
void stream_outcomes(const Scenario& s, Visitor&& visit) {
    const std::size_t n = s.n();
    const std::size_t m = s.m();
    std::vector<std::vector<double>> level(n + 1, std::vector<double>(m, 0.0));
    std::vector<double> prob(n + 1, 1.0);
    if (n == 0) {
        visit(1.0, level[0]);
        return;
    }

    // Explicit odometer over atom indices.
    std::vector<std::size_t> idx(n, 0);
    std::size_t k = 0;
    while (true) {
        if (k == n) {
            visit(prob[n], level[n]);
            // backtrack to the deepest coordinate with atoms left
            while (k > 0) {
                --k;
                if (++idx[k] < s.coords[k].atoms.size()) break;
                idx[k] = 0;
            }
            if (k == 0 && idx[0] == 0) return;
        }
        const std::size_t a = idx[k];
        prob[k + 1] = prob[k] * s.coords[k].atoms[a].prob;
        for (std::size_t i = 0; i < m; ++i) {
            level[k + 1][i] = level[k][i] + s.values[i][k][a];
        }
        ++k;
    }
}

} // namespace

double ExactSummary::prob_at_least(double z) const {
    auto it = std::lower_bound(distribution.begin(), distribution.end(), z,
                               [](const auto& pair, double v) { return pair.first < v; });
    const std::size_t j = static_cast<std::size_t>(it - distribution.begin());
    return j < suffix_prob.size() ? suffix_prob[j] : 0.0;
}

double ExactSummary::prob_at_most(double z) const {
    auto it = std::upper_bound(distribution.begin(), distribution.end(), z,
                               [](double v, const auto& pair) { return v < pair.first; });
    if (it == distribution.begin()) return 0.0;
    const std::size_t j = static_cast<std::size_t>(it - distribution.begin()) - 1;
    return prefix_prob[j];
}

double ExactSummary::log_mgf(double t) const {
    if (distribution.empty()) return 0.0;
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& [z, p] : distribution) shift = std::max(shift, t * z);
    double sum = 0.0;
    for (const auto& [z, p] : distribution) sum += p * std::exp(t * z - shift);
    return shift + std::log(sum);
}

double ExactSummary::min_z() const {
    return distribution.empty() ? 0.0 : distribution.front().first;
}

double ExactSummary::max_z() const {
    return distribution.empty() ? 0.0 : distribution.back().first;
}

ExactSummary enumerate_exact(const Scenario& s, const std::vector<double>& thresholds,
                             std::uint64_t cap) {
    const std::uint64_t needed = outcome_count(s);
    if (needed > cap) throw EnumerationCapError(needed, cap);

    std::map<double, double> dist;
    stream_outcomes(s, [&](double prob, const std::vector<double>& sums) {
        const double z = *std::max_element(sums.begin(), sums.end());
        dist[z] += prob;
    });

    ExactSummary out;
    out.distribution.assign(dist.begin(), dist.end());
    out.support_size = out.distribution.size();

    double total = 0.0;
    for (const auto& [z, p] : out.distribution) total += p;
    if (total != 1.0 && total > 0.0) {
        for (auto& [z, p] : out.distribution) p /= total;
    }

    double mean = 0.0;
    for (const auto& [z, p] : out.distribution) mean += p * z;
    double var = 0.0;
    for (const auto& [z, p] : out.distribution) var += p * (z - mean) * (z - mean);
    out.mean_z = mean;
    out.var_z = var;

    const std::size_t sz = out.distribution.size();
    out.prefix_prob.resize(sz);
    out.suffix_prob.resize(sz);
    double acc = 0.0;
    for (std::size_t j = 0; j < sz; ++j) {
        acc += out.distribution[j].second;
        out.prefix_prob[j] = acc;
    }
    acc = 0.0;
    for (std::size_t j = sz; j-- > 0;) {
        acc += out.distribution[j].second;
        out.suffix_prob[j] = acc;
    }

    out.median_z = out.max_z();
    for (std::size_t j = 0; j < sz; ++j) {
        if (out.prefix_prob[j] >= 0.5 - 1e-12) {
            out.median_z = out.distribution[j].first;
            break;
        }
    }

    out.tail.reserve(thresholds.size());
    for (double thr : thresholds) out.tail.emplace_back(thr, out.prob_at_least(thr));
    return out;
}

double talagrand_variance(const Scenario& s, std::uint64_t cap) {
    Scenario squared = s;
    for (auto& fn : squared.values) {
        for (auto& col : fn) {
            for (double& v : col) v = v * v;
        }
    }
    return enumerate_exact(squared, {}, cap).mean_z;
}

} // namespace epbound
