#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epbound/bounds.hpp"
#include "epbound/checks.hpp"
#include "epbound/numerics.hpp"
#include "epbound/report_io.hpp"
#include "epbound/scenario.hpp"
#include "epbound/scenario_io.hpp"

namespace {

using namespace epbound;
using nlohmann::json;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Accepts "start:stop:count" ranges and explicit comma lists.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0;
        double hi = 0.0;
        long count = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &extra) != 3 ||
            count < 1) {
            throw std::invalid_argument("grid must be start:stop:count or a comma list: " + text);
        }
        if (count == 1) return {lo};
        for (long i = 0; i < count; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw std::invalid_argument("bad grid entry: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

TailForm parse_form(const std::string& text) {
    if (text == "b") return TailForm::B;
    if (text == "c-tight") return TailForm::CTight;
    if (text == "c-simple") return TailForm::CSimple;
    throw std::invalid_argument("unknown form '" + text + "' (use b, c-tight, c-simple)");
}

Side parse_side(const std::string& text) {
    if (text == "upper") return Side::Upper;
    if (text == "lower") return Side::Lower;
    throw std::invalid_argument("unknown side '" + text + "' (use upper, lower)");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << text;
}

// Bennett tail from the generic log-Laplace shape with constants (a, b):
// exp(-(v a / b^2) h(b x / (v a))).
double bennett_preset_tail(double x, double v, double a, double b) {
    const double A = v * a / (b * b);
    return std::exp(-A * bennett_h(x / (A * b)));
}

struct CommonOut {
    std::string format = "plain";
    std::string path;
};

int cmd_bound(const std::string& side_s, const std::string& form_s, double mean_z, double v_n,
              double x, const CommonOut& out) {
    const Side side = parse_side(side_s);
    const TailForm form = parse_form(form_s);
    const BoundParams p = BoundParams::checked(mean_z, v_n);
    const double bound = tail_bound(x, p, form, side);
    if (out.format == "json") {
        const json j{{"side", side_s}, {"form", form_s}, {"mean_z", mean_z}, {"v_n", v_n},
                     {"v", p.v()},     {"x", x},         {"bound", bound}};
        emit(j.dump(), out.path);
    } else if (out.format == "csv") {
        std::ostringstream os;
        os << "side,form,mean_z,v_n,v,x,bound\n"
           << side_s << ',' << form_s << ',' << fmt12(mean_z) << ',' << fmt12(v_n) << ','
           << fmt12(p.v()) << ',' << fmt12(x) << ',' << fmt12(bound) << '\n';
        emit(os.str(), out.path);
    } else {
        emit("v " + fmt12(p.v()) + "\nbound " + fmt12(bound) + "\n", out.path);
    }
    return 0;
}

int cmd_invert(const std::string& side_s, const std::string& form_s, double mean_z, double v_n,
               double delta, const CommonOut& out) {
    const Side side = parse_side(side_s);
    const TailForm form = parse_form(form_s);
    const BoundParams p = BoundParams::checked(mean_z, v_n);
    const double x = invert_tail_bound(delta, p, form, side);
    if (out.format == "json") {
        const json j{{"side", side_s}, {"form", form_s}, {"mean_z", mean_z}, {"v_n", v_n},
                     {"v", p.v()},     {"delta", delta}, {"x", x}};
        emit(j.dump(), out.path);
    } else if (out.format == "csv") {
        std::ostringstream os;
        os << "side,form,mean_z,v_n,v,delta,x\n"
           << side_s << ',' << form_s << ',' << fmt12(mean_z) << ',' << fmt12(v_n) << ','
           << fmt12(p.v()) << ',' << fmt12(delta) << ',' << fmt12(x) << '\n';
        emit(os.str(), out.path);
    } else {
        emit("v " + fmt12(p.v()) + "\nx " + fmt12(x) + "\n", out.path);
    }
    return 0;
}

int cmd_compare(double mean_z, double v_n, const std::vector<double>& x_grid,
                const CommonOut& out) {
    if (x_grid.empty()) throw std::invalid_argument("compare: empty x grid");
    const BoundParams p = BoundParams::checked(mean_z, v_n);
    const double v = p.v();
    if (!(v > 0.0)) throw std::invalid_argument("compare: requires v_n + 2 mean_z > 0");

    const std::vector<std::string> columns{
        "x",              "upper_b",     "upper_c_tight",    "upper_c_simple",
        "upper_chernoff", "lower_b",     "lower_c_tight",    "lower_c_simple",
        "lower_chernoff", "bennett_b32", "bennett_b1",      "rademacher_median_centered"};

    std::vector<std::vector<double>> rows;
    for (double x : x_grid) {
        std::vector<double> row;
        row.push_back(x);
        row.push_back(upper_tail_bound(x, p, TailForm::B));
        row.push_back(upper_tail_bound(x, p, TailForm::CTight));
        row.push_back(upper_tail_bound(x, p, TailForm::CSimple));
        row.push_back(chernoff_optimized_tail(x, p, Side::Upper).bound);
        row.push_back(lower_tail_bound(x, p, TailForm::B));
        row.push_back(lower_tail_bound(x, p, TailForm::CTight));
        row.push_back(lower_tail_bound(x, p, TailForm::CSimple));
        row.push_back(chernoff_optimized_tail(x, p, Side::Lower).bound);
        row.push_back(bennett_preset_tail(x, v, 1.0, 1.5)); // a = 1, b = 3/2
        row.push_back(bennett_preset_tail(x, v, 1.0, 1.0)); // a = b = 1
        row.push_back(v_n > 0.0 ? rademacher_tail_bound(x, v_n)
                                : std::numeric_limits<double>::quiet_NaN());
        rows.push_back(std::move(row));
    }

    if (out.format == "json") {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < columns.size(); ++c) {
                if (std::isnan(row[c])) {
                    obj[columns[c]] = nullptr;
                } else {
                    obj[columns[c]] = row[c];
                }
            }
            arr.push_back(obj);
        }
        const json doc{{"mean_z", mean_z},
                       {"v_n", v_n},
                       {"v", v},
                       {"note", "rademacher_median_centered bounds deviations above a median, "
                                "not the mean"},
                       {"rows", arr}};
        emit(doc.dump(2), out.path);
    } else {
        std::ostringstream os;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << (c ? "," : "") << columns[c];
        }
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << (c ? "," : "") << (std::isnan(row[c]) ? std::string() : fmt12(row[c]));
            }
            os << '\n';
        }
        emit(os.str(), out.path);
    }
    return 0;
}

// Wraps the standard bound sets with a multiplicative factor; the
// fault-injection self-test of the certification harness.
std::vector<TailBoundDef> scaled_tail_bounds(double factor) {
    auto defs = standard_tail_bounds();
    if (factor == 1.0) return defs;
    for (auto& def : defs) {
        def.name += "_scaled";
        def.eval = [factor, inner = def.eval](double x, double v) {
            return factor * inner(x, v);
        };
    }
    return defs;
}

std::vector<LaplaceBoundDef> scaled_laplace_bounds(double factor) {
    auto defs = standard_laplace_bounds();
    if (factor == 1.0) return defs;
    for (auto& def : defs) {
        def.name += "_scaled";
        def.eval = [factor, inner = def.eval](double t, const BoundParams& p) {
            return factor * inner(t, p);
        };
    }
    return defs;
}

VarianceBoundDef scaled_variance_bound(double factor) {
    auto def = standard_variance_bound();
    if (factor == 1.0) return def;
    def.name += "_scaled";
    def.eval = [factor, inner = def.eval](double v_n, double mean_z) {
        return factor * inner(v_n, mean_z);
    };
    return def;
}

int emit_reports(const std::vector<CheckReport>& reports, const CommonOut& out) {
    if (out.format == "csv") {
        emit(reports_to_csv(reports), out.path);
    } else {
        emit(reports_to_json(reports), out.path);
    }
    for (const auto& r : reports) {
        if (!r.pass && !r.advisory) return 1;
    }
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& mode,
                 std::uint64_t trials, std::uint64_t seed, const std::string& x_grid_text,
                 const std::string& t_grid_text, unsigned workers, double perturb,
                 const CommonOut& out) {
    const Scenario s = load_scenario(scenario_path);
    const auto violations = validate(s);
    if (!violations.empty()) {
        std::ostringstream os;
        os << scenario_path << ": scenario fails validation:\n";
        for (const auto& v : violations) os << "  " << v.location << ": " << v.message << "\n";
        throw ScenarioParseError(os.str());
    }

    const bool enumerable = outcome_count(s) <= kDefaultEnumerationCap;
    bool exact = false;
    if (mode == "auto") {
        exact = enumerable;
    } else if (mode == "exact") {
        if (!enumerable) {
            throw std::invalid_argument("simulate: scenario is too large for exact mode");
        }
        exact = true;
    } else if (mode == "mc") {
        exact = false;
    } else {
        throw std::invalid_argument("simulate: unknown mode '" + mode + "'");
    }

    std::vector<double> x_grid;
    if (x_grid_text.empty()) {
        const double hi = std::max(1.0, max_supremum(s));
        for (int i = 0; i < 25; ++i) x_grid.push_back(hi * static_cast<double>(i) / 24.0);
    } else {
        x_grid = parse_grid(x_grid_text);
    }

    std::vector<CheckReport> reports;
    if (exact) {
        std::vector<double> t_grid;
        if (t_grid_text.empty()) {
            t_grid = {0.0, 0.001, 0.01, 0.05};
            for (int i = 0; i < 30; ++i) t_grid.push_back(0.1 + 2.9 * i / 29.0);
            t_grid.push_back(0.65);
            t_grid.push_back(phi_unit_root());
        } else {
            t_grid = parse_grid(t_grid_text);
        }
        reports.push_back(
            check_tail_bounds(s, x_grid, CheckMode::exact(), scaled_tail_bounds(perturb)));
        reports.push_back(check_log_laplace_bounds(s, t_grid, scaled_laplace_bounds(perturb)));
        reports.push_back(check_variance_bound(s, scaled_variance_bound(perturb)));
    } else {
        reports.push_back(check_tail_bounds(s, x_grid,
                                            CheckMode::monte_carlo(trials, seed, workers),
                                            scaled_tail_bounds(perturb)));
    }
    return emit_reports(reports, out);
}

int cmd_lemmas(int grid_points, const CommonOut& out) {
    std::vector<CheckReport> reports = scalar_inequality_reports(grid_points);
    reports.push_back(check_root_intervals());

    std::vector<double> x_grid;
    for (int i = 0; i < 200; ++i) x_grid.push_back(50.0 * i / 199.0);
    reports.push_back(check_legendre_conjugate(x_grid));

    std::vector<double> t_grid;
    const int tn = 3 * grid_points;
    for (int i = 1; i <= tn; ++i) t_grid.push_back(3.0 * i / tn);
    for (const auto& dist : entropy_test_battery()) {
        reports.push_back(check_entropy_inequality(dist, t_grid));
    }
    return emit_reports(reports, out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentration bounds for suprema of bounded empirical processes: "
                 "evaluation, inversion, comparison tables and certification against "
                 "exact enumeration and Monte Carlo."};
    app.require_subcommand(1);

    std::string side = "upper";
    std::string form = "c-simple";
    double mean_z = 0.0;
    double v_n = 0.0;
    double x = 0.0;
    double delta = 0.5;
    std::string x_grid_text;
    std::string t_grid_text;
    std::string scenario_path;
    std::string mode = "auto";
    std::uint64_t trials = 200000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    double perturb = 1.0;
    int grid_points = 512;
    CommonOut out;

    auto add_output = [&](CLI::App* cmd, const std::string& default_format) {
        cmd->parse_complete_callback([&out, default_format, cmd] {
            if (cmd->count("--format") == 0) out.format = default_format;
        });
        cmd->add_option("--format", out.format, "Output format")
            ->check(CLI::IsMember({"plain", "csv", "json"}));
        cmd->add_option("--out", out.path, "Write output to a file instead of stdout");
    };

    CLI::App* bound = app.add_subcommand("bound", "Evaluate one tail bound");
    bound->add_option("--side", side)->required();
    bound->add_option("--form", form)->required();
    bound->add_option("--mean-z", mean_z, "E(Z)");
    bound->add_option("--v-n", v_n, "maximal variance");
    bound->add_option("--x", x, "deviation")->required();
    add_output(bound, "plain");

    CLI::App* invert = app.add_subcommand("invert", "Deviation with bound(x) = delta");
    invert->add_option("--side", side)->required();
    invert->add_option("--form", form)->required();
    invert->add_option("--mean-z", mean_z, "E(Z)");
    invert->add_option("--v-n", v_n, "maximal variance");
    invert->add_option("--delta", delta, "target bound value in (0,1)")->required();
    add_output(invert, "plain");

    CLI::App* compare = app.add_subcommand("compare", "Bound comparison table over an x grid");
    compare->add_option("--mean-z", mean_z, "E(Z)");
    compare->add_option("--v-n", v_n, "maximal variance");
    compare->add_option("--x-grid", x_grid_text, "start:stop:count or comma list")->required();
    add_output(compare, "csv");

    CLI::App* simulate =
        app.add_subcommand("simulate", "Certify the bounds against a scenario file");
    simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--mode", mode, "auto, exact or mc")
        ->check(CLI::IsMember({"auto", "exact", "mc"}));
    simulate->add_option("--trials", trials, "Monte Carlo trials");
    simulate->add_option("--seed", seed, "Monte Carlo master seed");
    simulate->add_option("--x-grid", x_grid_text, "deviation grid");
    simulate->add_option("--t-grid", t_grid_text, "log-Laplace grid (exact mode)");
    simulate->add_option("--workers", workers,
                         "worker threads (0 = hardware); never affects output values");
    simulate->add_option("--perturb", perturb,
                         "scale all bounds by this factor (fault-injection self-test)");
    add_output(simulate, "json");

    CLI::App* lemmas = app.add_subcommand("lemmas", "Run the scalar-inequality suite");
    lemmas->add_option("--grid-points", grid_points, "grid points per unit interval (>= 100)")
        ->check(CLI::Range(100, 100000));
    add_output(lemmas, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bound->parsed()) return cmd_bound(side, form, mean_z, v_n, x, out);
        if (invert->parsed()) return cmd_invert(side, form, mean_z, v_n, delta, out);
        if (compare->parsed()) return cmd_compare(mean_z, v_n, parse_grid(x_grid_text), out);
        if (simulate->parsed()) {
            return cmd_simulate(scenario_path, mode, trials, seed, x_grid_text, t_grid_text,
                                workers, perturb, out);
        }
        if (lemmas->parsed()) return cmd_lemmas(grid_points, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
