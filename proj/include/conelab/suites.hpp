#pragma once

#include <string>
#include <vector>

#include "conelab/report.hpp"
#include "conelab/settings.hpp"

namespace conelab {

/// Names accepted by run_suite, "all" last.
std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);

/// Runs every check of the named suite. Checks fan out across worker
/// threads and the assembled report is sorted by check id, so the result
/// is independent of scheduling. Unknown names raise invalid_argument.
/// Thresholds are pinned per check; settings only supply grid density,
/// seed and the report envelope.
SuiteReport run_suite(const std::string& name, const Settings& settings);

}  // namespace conelab
