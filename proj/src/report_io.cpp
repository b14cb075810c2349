#include "epbound/report_io.hpp"

#include <sstream>

#include <json.hpp>

namespace epbound {

namespace {

using nlohmann::json;

json report_to_json_value(const CheckReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"location", v.location}, {"slack", v.slack}});
    }
    return json{{"check", r.check_name},     {"domain", r.domain},
                {"tolerance", r.tolerance},  {"worst_margin", r.worst_margin},
                {"pass", r.pass},            {"advisory", r.advisory},
                {"violations", violations}};
}

CheckReport report_from_json_value(const json& j) {
    CheckReport r;
    r.check_name = j.at("check").get<std::string>();
    r.domain = j.at("domain").get<std::string>();
    r.tolerance = j.at("tolerance").get<double>();
    r.worst_margin = j.at("worst_margin").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.advisory = j.at("advisory").get<bool>();
    for (const auto& v : j.at("violations")) {
        r.violations.push_back(
            {v.at("location").get<std::string>(), v.at("slack").get<double>()});
    }
    return r;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string report_to_json(const CheckReport& r) {
    return report_to_json_value(r).dump();
}

std::string reports_to_json(const std::vector<CheckReport>& rs) {
    json arr = json::array();
    for (const auto& r : rs) arr.push_back(report_to_json_value(r));
    return arr.dump(2);
}

CheckReport report_from_json(const std::string& text) {
    return report_from_json_value(json::parse(text));
}

std::vector<CheckReport> reports_from_json(const std::string& text) {
    const json arr = json::parse(text);
    std::vector<CheckReport> out;
    for (const auto& j : arr) out.push_back(report_from_json_value(j));
    return out;
}

std::string reports_to_csv(const std::vector<CheckReport>& rs) {
    std::ostringstream os;
    os << "check_name,domain,worst_margin,pass\n";
    char buf[40];
    for (const auto& r : rs) {
        std::snprintf(buf, sizeof(buf), "%.12g", r.worst_margin);
        os << csv_escape(r.check_name) << ',' << csv_escape(r.domain) << ',' << buf << ','
           << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string sim_result_to_json(const SimResult& r) {
    json tails = json::array();
    for (const auto& t : r.tails) {
        tails.push_back({{"threshold", t.threshold},
                         {"count_ge", t.count_ge},
                         {"count_le", t.count_le},
                         {"freq_ge", t.freq_ge},
                         {"freq_le", t.freq_le},
                         {"lcb_ge", t.lcb_ge},
                         {"lcb_le", t.lcb_le}});
    }
    const json j{{"trials", r.trials},       {"seed", r.seed},
                 {"mean_z", r.mean_z},       {"var_z", r.var_z},
                 {"median_z", r.median_z},   {"se_mean", r.se_mean},
                 {"se_var", r.se_var},       {"se_median", r.se_median},
                 {"se_defined", r.se_defined}, {"tails", tails}};
    return j.dump();
}

} // namespace epbound
