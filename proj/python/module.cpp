#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epbound/bounds.hpp"
#include "epbound/checks.hpp"
#include "epbound/montecarlo.hpp"
#include "epbound/numerics.hpp"
#include "epbound/report_io.hpp"
#include "epbound/scenario.hpp"
#include "epbound/scenario_io.hpp"

namespace py = pybind11;
using namespace epbound;

namespace {

CoordinateDist dist_from_pairs(const std::vector<std::pair<double, double>>& atoms) {
    CoordinateDist d;
    for (const auto& [value, prob] : atoms) d.atoms.push_back({value, prob});
    return d;
}

std::vector<CoordinateDist> dists_from_pairs(
    const std::vector<std::vector<std::pair<double, double>>>& coords) {
    std::vector<CoordinateDist> out;
    out.reserve(coords.size());
    for (const auto& c : coords) out.push_back(dist_from_pairs(c));
    return out;
}

CheckMode make_mode(const std::string& mode, std::uint64_t trials, std::uint64_t seed,
                    unsigned workers) {
    if (mode == "exact") return CheckMode::exact();
    if (mode == "mc") return CheckMode::monte_carlo(trials, seed, workers);
    throw std::invalid_argument("mode must be 'exact' or 'mc'");
}

} // namespace

PYBIND11_MODULE(epbound, m) {
    m.doc() = "Concentration bounds for suprema of bounded empirical processes: closed-form "
              "tail/log-Laplace bounds, their inversion and Chernoff optimization, exact "
              "enumeration and Monte Carlo certification of finite scenarios.";

    py::register_exception<ScenarioParseError>(m, "ScenarioParseError", PyExc_ValueError);
    py::register_exception<EnumerationCapError>(m, "EnumerationCapError", PyExc_RuntimeError);

    py::class_<BoundParams>(m, "BoundParams")
        .def(py::init(&BoundParams::checked), py::arg("mean_z"), py::arg("v_n"))
        .def_readonly("mean_z", &BoundParams::mean_z)
        .def_readonly("v_n", &BoundParams::v_n)
        .def_property_readonly("v", &BoundParams::v)
        .def("__repr__", [](const BoundParams& p) {
            return "BoundParams(mean_z=" + std::to_string(p.mean_z) +
                   ", v_n=" + std::to_string(p.v_n) + ")";
        });

    py::enum_<TailForm>(m, "TailForm")
        .value("B", TailForm::B)
        .value("C_TIGHT", TailForm::CTight)
        .value("C_SIMPLE", TailForm::CSimple);

    py::enum_<Side>(m, "Side").value("UPPER", Side::Upper).value("LOWER", Side::Lower);

    py::class_<BoundEval>(m, "BoundEval")
        .def_readonly("value", &BoundEval::value)
        .def_readonly("saturated", &BoundEval::saturated)
        .def("__float__", [](const BoundEval& e) { return e.value; });

    m.def("bennett_h", &bennett_h, py::arg("x"));
    m.def("psi", &psi, py::arg("t"));
    m.def("phi", &phi, py::arg("t"));
    m.def("upper_log_laplace_bound", &upper_log_laplace_bound, py::arg("t"), py::arg("params"));
    m.def("subgamma_log_laplace_bound", &subgamma_log_laplace_bound, py::arg("t"),
          py::arg("params"));
    m.def("lower_log_laplace_bound", &lower_log_laplace_bound, py::arg("t"), py::arg("params"));
    m.def("bennett_log_laplace", &bennett_log_laplace, py::arg("t"), py::arg("mean_z"),
          py::arg("V"), py::arg("a"), py::arg("b"));
    m.def("upper_tail_bound", &upper_tail_bound, py::arg("x"), py::arg("params"),
          py::arg("form"));
    m.def("lower_tail_bound", &lower_tail_bound, py::arg("x"), py::arg("params"),
          py::arg("form"));
    m.def("tail_bound", &tail_bound, py::arg("x"), py::arg("params"), py::arg("form"),
          py::arg("side"));
    m.def("rademacher_tail_bound", &rademacher_tail_bound, py::arg("x"), py::arg("v_n"));
    m.def("subgamma_legendre", &subgamma_legendre, py::arg("x"));
    m.def("variance_upper_bound", &variance_upper_bound, py::arg("v_n"), py::arg("mean_z"));
    m.def(
        "chernoff_optimized_tail",
        [](double x, const BoundParams& p, Side side) {
            const ChernoffTail r = chernoff_optimized_tail(x, p, side);
            return py::make_tuple(r.bound, r.t_star);
        },
        py::arg("x"), py::arg("params"), py::arg("side"),
        "Returns (bound, t_star).");
    m.def("invert_tail_bound", &invert_tail_bound, py::arg("delta"), py::arg("params"),
          py::arg("form"), py::arg("side"));

    m.def("phi_integral", [](double t) { return phi_integral(t); }, py::arg("t"));
    m.def("kernel_integral", [](double t) { return kernel_integral(t); }, py::arg("t"));
    m.def("phi_unit_root", &phi_unit_root);
    m.def("bennett_crossing_root", &bennett_crossing_root);
    m.def("lower_log_laplace_refined", &lower_log_laplace_refined, py::arg("t"),
          py::arg("mean_z"), py::arg("v_n"));

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("n", &Scenario::n)
        .def_property_readonly("m", &Scenario::m)
        .def("__repr__", &scenario_summary);

    m.def(
        "build_rademacher",
        [](const std::vector<std::vector<double>>& zeta,
           const std::vector<std::vector<std::pair<double, double>>>& coords) {
            return build_rademacher(zeta, dists_from_pairs(coords));
        },
        py::arg("zeta"), py::arg("coords") = std::vector<std::vector<std::pair<double, double>>>{},
        "Coordinates are lists of (value, prob) pairs; default symmetric signs.");
    m.def("build_set_indexed", &build_set_indexed, py::arg("space_size"),
          py::arg("coord_probs"), py::arg("sets"));
    m.def(
        "build_general",
        [](const std::vector<std::vector<std::pair<double, double>>>& coords,
           const std::vector<std::vector<std::vector<double>>>& values) {
            return build_general(dists_from_pairs(coords), values);
        },
        py::arg("coords"), py::arg("values"));
    m.def("scenario_from_json", &scenario_from_json, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("scenario_to_json", &scenario_to_json, py::arg("scenario"));
    m.def(
        "validate",
        [](const Scenario& s) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : validate(s)) out.emplace_back(v.location, v.message);
            return out;
        },
        py::arg("scenario"), "List of (location, message) violations; empty when valid.");
    m.def("max_variance", &max_variance, py::arg("scenario"));
    m.def("talagrand_variance", &talagrand_variance, py::arg("scenario"),
          py::arg("cap") = kDefaultEnumerationCap);
    m.def("outcome_count", &outcome_count, py::arg("scenario"));
    m.def("max_supremum", &max_supremum, py::arg("scenario"));

    py::class_<ExactSummary>(m, "ExactSummary")
        .def_readonly("mean_z", &ExactSummary::mean_z)
        .def_readonly("var_z", &ExactSummary::var_z)
        .def_readonly("median_z", &ExactSummary::median_z)
        .def_readonly("support_size", &ExactSummary::support_size)
        .def_readonly("distribution", &ExactSummary::distribution)
        .def_readonly("tail", &ExactSummary::tail)
        .def("prob_at_least", &ExactSummary::prob_at_least, py::arg("z"))
        .def("prob_at_most", &ExactSummary::prob_at_most, py::arg("z"))
        .def("log_mgf", &ExactSummary::log_mgf, py::arg("t"));

    m.def("enumerate_exact", &enumerate_exact, py::arg("scenario"),
          py::arg("thresholds") = std::vector<double>{},
          py::arg("cap") = kDefaultEnumerationCap);
    m.def("sample_supremum", &sample_supremum, py::arg("scenario"), py::arg("seed"),
          py::arg("trial"));

    py::class_<TailFrequency>(m, "TailFrequency")
        .def_readonly("threshold", &TailFrequency::threshold)
        .def_readonly("count_ge", &TailFrequency::count_ge)
        .def_readonly("count_le", &TailFrequency::count_le)
        .def_readonly("freq_ge", &TailFrequency::freq_ge)
        .def_readonly("freq_le", &TailFrequency::freq_le)
        .def_readonly("lcb_ge", &TailFrequency::lcb_ge)
        .def_readonly("lcb_le", &TailFrequency::lcb_le);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("trials", &SimResult::trials)
        .def_readonly("seed", &SimResult::seed)
        .def_readonly("mean_z", &SimResult::mean_z)
        .def_readonly("var_z", &SimResult::var_z)
        .def_readonly("median_z", &SimResult::median_z)
        .def_readonly("se_mean", &SimResult::se_mean)
        .def_readonly("se_var", &SimResult::se_var)
        .def_readonly("se_median", &SimResult::se_median)
        .def_readonly("se_defined", &SimResult::se_defined)
        .def_readonly("tails", &SimResult::tails)
        .def("to_json", &sim_result_to_json);

    m.def("estimate_stats", &estimate_stats, py::arg("scenario"), py::arg("trials"),
          py::arg("seed"), py::arg("thresholds") = std::vector<double>{},
          py::arg("workers") = 0u);
    m.def("binomial_lcb", &binomial_lcb, py::arg("successes"), py::arg("trials"));

    py::class_<CheckViolation>(m, "CheckViolation")
        .def_readonly("location", &CheckViolation::location)
        .def_readonly("slack", &CheckViolation::slack);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("check_name", &CheckReport::check_name)
        .def_readonly("domain", &CheckReport::domain)
        .def_readonly("tolerance", &CheckReport::tolerance)
        .def_readonly("worst_margin", &CheckReport::worst_margin)
        .def_readonly("pass_", &CheckReport::pass)
        .def_property_readonly("passed", [](const CheckReport& r) { return r.pass; })
        .def_readonly("advisory", &CheckReport::advisory)
        .def_readonly("violations", &CheckReport::violations)
        .def("to_json", [](const CheckReport& r) { return report_to_json(r); });

    m.def(
        "check_tail_bounds",
        [](const Scenario& s, const std::vector<double>& x_grid, const std::string& mode,
           std::uint64_t trials, std::uint64_t seed, unsigned workers) {
            return check_tail_bounds(s, x_grid, make_mode(mode, trials, seed, workers));
        },
        py::arg("scenario"), py::arg("x_grid"), py::arg("mode") = "exact",
        py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("workers") = 0u);
    m.def(
        "check_log_laplace_bounds",
        [](const Scenario& s, const std::vector<double>& t_grid) {
            return check_log_laplace_bounds(s, t_grid);
        },
        py::arg("scenario"), py::arg("t_grid"));
    m.def(
        "check_variance_bound",
        [](const Scenario& s) { return check_variance_bound(s); }, py::arg("scenario"));
    m.def("check_scalar_inequalities", &check_scalar_inequalities,
          py::arg("points_per_unit") = 512);
    m.def(
        "scalar_inequality_reports",
        [](int ppu) { return scalar_inequality_reports(ppu); },
        py::arg("points_per_unit") = 512);
    m.def(
        "check_entropy_inequality",
        [](const std::vector<std::pair<double, double>>& atoms,
           const std::vector<double>& t_grid) {
            return check_entropy_inequality(dist_from_pairs(atoms), t_grid);
        },
        py::arg("atoms"), py::arg("t_grid"));
    m.def("check_legendre_conjugate", &check_legendre_conjugate, py::arg("x_grid"));
    m.def("check_root_intervals", &check_root_intervals);
    m.def("reports_to_csv", &reports_to_csv, py::arg("reports"));
}
