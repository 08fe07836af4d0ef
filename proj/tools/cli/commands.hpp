#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace gaussbounds::cli {

struct SweepRow {
  double theta = 0.0;
  double CS = 0.0, CR = 0.0, CHbar = 0.0, CH = 0.0, R = 0.0;
  std::string status;
  std::string error;  // empty unless status == "error"
};

// Rows in grid order; points run on config.jobs worker threads.
std::vector<SweepRow> run_sweep(const RunConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Each returns the process exit code. Results go to `out` (or config.output),
// diagnostics to `err`.
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gaussbounds::cli
