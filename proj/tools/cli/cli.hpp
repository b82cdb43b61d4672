#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magiclab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kUsageError = 2,
  kNegative = 3,
  kSolverFailure = 4,
};

/// Runs one command line (args exclude the program name). Results go to `out`,
/// logs and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SweepRow {
  std::vector<double> values;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
};

/// Grid "a:b:step", inclusive of b up to rounding; numbers may carry a "pi" suffix.
std::vector<double> parse_grid(const std::string& spec);

/// Families: dep-t, dep3-ccx, utheta, noisy-ccx. Grid points are evaluated on
/// `threads` workers; row order follows the grid.
SweepTable run_sweep(const std::string& family, const std::vector<double>& grid, int threads,
                     double target_noise = 0.01);

void write_csv(const SweepTable& table, std::ostream& out);

}  // namespace magiclab::cli
