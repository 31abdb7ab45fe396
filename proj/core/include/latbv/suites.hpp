#pragma once

#include "latbv/config.hpp"
#include "latbv/report.hpp"

namespace latbv {

std::vector<std::string> known_suites();

// executes the selected suites (all when none selected) in dependency order;
// failed prerequisites mark dependent suites SKIPPED
Report run_suite(const RunConfig& cfg);

}  // namespace latbv
