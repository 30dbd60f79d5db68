#pragma once
// Scenario execution: product-grid sweeps, worker pool, CSV emission.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "twinwell/config.hpp"

namespace twinwell {

struct RunSummary {
  std::vector<std::string> columns;
  std::size_t rows = 0;
  std::size_t tasks = 0;
};

// Column names of the CSV that run() would write.
std::vector<std::string> output_columns(const ScenarioConfig& cfg);

// Checks every grid point's parameters without computing anything.
RunSummary validate_scenario(const ScenarioConfig& cfg);

// Writes the CSV to `os`.
RunSummary run_to_stream(const ScenarioConfig& cfg, std::ostream& os);

// Writes the CSV to cfg.output ("-" for stdout). The file is written only
// after every grid point succeeded.
RunSummary run(const ScenarioConfig& cfg);

}  // namespace twinwell
