#pragma once

// Command-line front end. The executable is a thin wrapper around run_cli so
// that tests can drive every command in-process.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitComputationFailure = 1,
  kExitUsageError = 2,
};

// Invalid flags or parameter values; mapped to kExitUsageError.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Json, Csv };

// Parameters shared by all subcommands. Unused fields keep their defaults.
struct RunConfig {
  std::string command;

  // bounds / evaluate / sweep
  std::vector<std::string> kinds;
  std::vector<std::size_t> ns;
  std::size_t grid_points = 20000;
  int grid_restarts = 3;
  bool quantum = false;
  int seesaw_starts = 20;

  // evaluate / decompose / sweep
  std::optional<double> p;
  std::vector<double> p_list;
  double p_start = 0.0;
  double p_stop = 1.0;
  double p_step = 0.05;

  // thresholds
  double tolerance = 1e-9;

  // tomo
  std::string state = "werner:1.0";
  std::string target = "psi-plus";
  std::uint64_t shots = 10000;
  std::size_t repetitions = 20;
  bool analytic = false;
  bool poisson = false;
  std::string counts_in;
  std::string counts_out;

  std::uint64_t seed = 0;
  std::string out_path;
  std::optional<OutputFormat> format;
};

// Environment variable naming the directory for output files when --out is
// not given. Without either, output goes to the `out` stream.
inline constexpr const char* kOutputDirEnv = "QCORR_OUTPUT_DIR";

// Parses `args` (without the program name), runs the command and returns an
// ExitCode. Results go to `out` or to a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Regular p grid start, start + step, ..., stop (inclusive up to rounding),
// with values rounded to 12 decimals. Throws UsageError when empty or outside
// [0, 1].
std::vector<double> p_grid(double start, double stop, double step);

}  // namespace qcorr::cli
