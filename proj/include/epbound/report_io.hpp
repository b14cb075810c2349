#pragma once

#include <string>
#include <vector>

#include "epbound/checks.hpp"
#include "epbound/montecarlo.hpp"

namespace epbound {

// Lossless JSON serialization (shortest round-trip doubles); identical inputs
// produce byte-identical output.
std::string report_to_json(const CheckReport& r);
std::string reports_to_json(const std::vector<CheckReport>& rs); // one array document
CheckReport report_from_json(const std::string& text);
std::vector<CheckReport> reports_from_json(const std::string& text);

// CSV summary: header check_name,domain,worst_margin,pass then one row per check.
std::string reports_to_csv(const std::vector<CheckReport>& rs);

std::string sim_result_to_json(const SimResult& r);

} // namespace epbound
