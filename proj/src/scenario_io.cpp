#include "epbound/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace epbound {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ScenarioParseError(where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

CoordinateDist parse_coordinate(const json& c, const std::string& where) {
    if (!c.is_object()) fail(where, "expected an object with an 'atoms' list");
    reject_unknown_keys(c, {"atoms"}, where);
    if (!c.contains("atoms") || !c["atoms"].is_array() || c["atoms"].empty()) {
        fail(where, "missing nonempty 'atoms' list");
    }
    CoordinateDist dist;
    std::size_t idx = 0;
    for (const auto& a : c["atoms"]) {
        std::ostringstream os;
        os << where << ".atoms[" << idx << "]";
        if (!a.is_object()) fail(os.str(), "expected {value, prob}");
        reject_unknown_keys(a, {"value", "prob"}, os.str());
        if (!a.contains("value") || !a.contains("prob")) fail(os.str(), "expected {value, prob}");
        dist.atoms.push_back(
            {as_number(a["value"], os.str() + ".value"), as_number(a["prob"], os.str() + ".prob")});
        ++idx;
    }
    return dist;
}

Scenario parse_general(const json& root) {
    reject_unknown_keys(root, {"kind", "coordinates", "functions"}, "$");
    if (!root.contains("coordinates") || !root["coordinates"].is_array() ||
        root["coordinates"].empty()) {
        fail("$.coordinates", "missing nonempty coordinate list");
    }
    if (!root.contains("functions") || !root["functions"].is_array() ||
        root["functions"].empty()) {
        fail("$.functions", "missing nonempty function list");
    }
    std::vector<CoordinateDist> coords;
    std::size_t k = 0;
    for (const auto& c : root["coordinates"]) {
        std::ostringstream os;
        os << "$.coordinates[" << k++ << "]";
        coords.push_back(parse_coordinate(c, os.str()));
    }
    std::vector<std::vector<std::vector<double>>> values;
    std::size_t i = 0;
    for (const auto& fn : root["functions"]) {
        std::ostringstream fo;
        fo << "$.functions[" << i++ << "]";
        if (!fn.is_array() || fn.size() != coords.size()) {
            fail(fo.str(), "expected one per-atom value list per coordinate");
        }
        std::vector<std::vector<double>> per_coord;
        std::size_t kk = 0;
        for (const auto& col : fn) {
            std::ostringstream co;
            co << fo.str() << "[" << kk << "]";
            if (!col.is_array() || col.size() != coords[kk].atoms.size()) {
                fail(co.str(), "value list must align with the coordinate's atom list");
            }
            std::vector<double> vals;
            for (const auto& v : col) vals.push_back(as_number(v, co.str()));
            per_coord.push_back(std::move(vals));
            ++kk;
        }
        values.push_back(std::move(per_coord));
    }
    try {
        return build_general(std::move(coords), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ScenarioParseError(std::string("$: ") + e.what());
    }
}

Scenario parse_rademacher(const json& root) {
    reject_unknown_keys(root, {"kind", "zeta", "coordinates"}, "$");
    if (!root.contains("zeta") || !root["zeta"].is_array() || root["zeta"].empty()) {
        fail("$.zeta", "missing nonempty matrix");
    }
    std::vector<std::vector<double>> zeta;
    std::size_t i = 0;
    for (const auto& row : root["zeta"]) {
        std::ostringstream os;
        os << "$.zeta[" << i++ << "]";
        if (!row.is_array() || row.empty()) fail(os.str(), "expected a nonempty row");
        std::vector<double> r;
        for (const auto& v : row) r.push_back(as_number(v, os.str()));
        zeta.push_back(std::move(r));
    }
    std::vector<CoordinateDist> coords;
    if (root.contains("coordinates")) {
        if (!root["coordinates"].is_array()) fail("$.coordinates", "expected a list");
        std::size_t k = 0;
        for (const auto& c : root["coordinates"]) {
            std::ostringstream os;
            os << "$.coordinates[" << k++ << "]";
            coords.push_back(parse_coordinate(c, os.str()));
        }
    }
    try {
        return build_rademacher(zeta, std::move(coords));
    } catch (const std::invalid_argument& e) {
        throw ScenarioParseError(std::string("$: ") + e.what());
    }
}

Scenario parse_set_indexed(const json& root) {
    reject_unknown_keys(root, {"kind", "space_size", "coordinate_probs", "sets"}, "$");
    if (!root.contains("space_size") || !root["space_size"].is_number_unsigned()) {
        fail("$.space_size", "expected a positive integer");
    }
    const auto space_size = root["space_size"].get<std::uint64_t>();
    if (!root.contains("coordinate_probs") || !root["coordinate_probs"].is_array() ||
        root["coordinate_probs"].empty()) {
        fail("$.coordinate_probs", "missing nonempty list of probability vectors");
    }
    std::vector<std::vector<double>> probs;
    std::size_t k = 0;
    for (const auto& vec : root["coordinate_probs"]) {
        std::ostringstream os;
        os << "$.coordinate_probs[" << k++ << "]";
        if (!vec.is_array()) fail(os.str(), "expected a probability vector");
        std::vector<double> p;
        for (const auto& v : vec) p.push_back(as_number(v, os.str()));
        probs.push_back(std::move(p));
    }
    if (!root.contains("sets") || !root["sets"].is_array() || root["sets"].empty()) {
        fail("$.sets", "missing nonempty set list");
    }
    std::vector<std::vector<std::size_t>> sets;
    std::size_t i = 0;
    for (const auto& st : root["sets"]) {
        std::ostringstream os;
        os << "$.sets[" << i++ << "]";
        if (!st.is_array()) fail(os.str(), "expected a list of 0-based indices");
        std::vector<std::size_t> indices;
        for (const auto& v : st) {
            if (!v.is_number_unsigned()) fail(os.str(), "expected 0-based indices");
            indices.push_back(v.get<std::size_t>());
        }
        sets.push_back(std::move(indices));
    }
    try {
        return build_set_indexed(static_cast<std::size_t>(space_size), probs, sets);
    } catch (const std::invalid_argument& e) {
        throw ScenarioParseError(std::string("$: ") + e.what());
    }
}

} // namespace

Scenario scenario_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(std::string("$: ") + e.what());
    }
    if (!root.is_object()) fail("$", "expected a JSON object");
    if (!root.contains("kind") || !root["kind"].is_string()) {
        fail("$.kind", "expected one of \"general\", \"rademacher\", \"set_indexed\"");
    }
    const std::string kind = root["kind"].get<std::string>();
    if (kind == "general") return parse_general(root);
    if (kind == "rademacher") return parse_rademacher(root);
    if (kind == "set_indexed") return parse_set_indexed(root);
    fail("$.kind", "unknown kind '" + kind + "'");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
    json root;
    root["kind"] = "general";
    json coords = json::array();
    for (const auto& c : s.coords) {
        json atoms = json::array();
        for (const auto& a : c.atoms) atoms.push_back({{"value", a.value}, {"prob", a.prob}});
        coords.push_back({{"atoms", atoms}});
    }
    root["coordinates"] = coords;
    json functions = json::array();
    for (const auto& fn : s.values) {
        json per_coord = json::array();
        for (const auto& col : fn) per_coord.push_back(col);
        functions.push_back(per_coord);
    }
    root["functions"] = functions;
    return root.dump();
}

} // namespace epbound
