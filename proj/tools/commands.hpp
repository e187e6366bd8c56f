#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "invroot/matgen.hpp"
#include "invroot/solver.hpp"

namespace invroot::cli {

/// Process exit codes; stable for scripting.
enum ExitCode : int {
  kSuccess = 0,
  kNumericalFailure = 1,
  kUsageError = 2,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either a Matrix Market file or a generator spec.
struct MatrixSource {
  std::optional<std::filesystem::path> file;
  OverlapSpec generated;

  Matrix load() const;
  std::string describe() const;
};

struct GenOptions {
  OverlapSpec spec;
  std::filesystem::path out;
};

struct SolveOptions {
  MatrixSource source;
  SolverConfig config;
  std::optional<std::filesystem::path> trace_csv;
  std::optional<std::filesystem::path> trace_json;
  bool reference_oracle = false;
};

enum class SweepMode { all_arithmetic, storage_only };

std::string_view to_string(SweepMode m) noexcept;
/// Accepts `arith`, `all-arithmetic`, `storage`, `storage-only`.
SweepMode parse_sweep_mode(std::string_view text);

struct SweepSpec {
  MatrixSource source;
  std::vector<int> p_values{2};
  SweepMode mode = SweepMode::all_arithmetic;
  std::vector<std::string> formats;
  int max_iters = 100;
  double residual_tol = 1e-12;
  std::filesystem::path out_dir;
  int jobs = 1;
  bool reference_oracle = false;

  void validate() const;
};

struct SweepRow {
  int p = 0;
  SweepMode mode = SweepMode::all_arithmetic;
  std::string format;
  Outcome outcome = Outcome::iteration_limit;
  double plateau = 0.0;
  int phase1_end = 0;
  int iters = 0;
};

inline constexpr const char* kSummaryCsvHeader = "p,mode,format,outcome,plateau,phase1_end,iters";

/// Trace file name of one sweep cell, e.g. `p2_storage-only_float-e11m10.csv`.
std::string cell_file_stem(int p, SweepMode mode, const std::string& format);

/// Runs every (p, format) cell, writes one trace CSV per cell plus
/// `summary.csv` into `out_dir`, and returns the summary rows in grid order
/// (p outer, format inner). Cells run on `jobs` threads; output does not
/// depend on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct ValidateOptions {
  MatrixSource source;
  int p = 2;
  int max_iters = 200;
  double residual_tol = 1e-12;
  double max_gap = 1e-6;
};

struct ValidateReport {
  double gap = 0.0;
  double solver_residual = 0.0;
  double oracle_residual = 0.0;
  Outcome outcome = Outcome::iteration_limit;
  int iterations = 0;
};

ValidateReport run_validate(const ValidateOptions& opts);

int cmd_gen(const GenOptions& opts, std::ostream& out);
int cmd_solve(const SolveOptions& opts, std::ostream& out);
int cmd_sweep(const SweepSpec& spec, std::ostream& out);
int cmd_validate(const ValidateOptions& opts, std::ostream& out);

/// Parses argv and dispatches to a subcommand; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invroot::cli
