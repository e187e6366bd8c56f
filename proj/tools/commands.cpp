#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "invroot/errors.hpp"
#include "invroot/mtx_io.hpp"
#include "invroot/oracle.hpp"
#include "invroot/trace_io.hpp"

namespace invroot::cli {
namespace {

bool is_failure(Outcome o) { return o == Outcome::diverged || o == Outcome::non_finite; }

void write_file(const std::filesystem::path& path, const auto& writer) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SolveTrace run_cell(const Matrix& a, const SweepSpec& spec, int p, const ArithmeticModel& model,
                    const std::optional<Matrix>& reference) {
  SolverConfig cfg;
  cfg.p = p;
  cfg.max_iters = spec.max_iters;
  cfg.residual_tol = spec.residual_tol;
  if (spec.mode == SweepMode::all_arithmetic) {
    cfg.arith = model;
  } else {
    cfg.storage = model;
  }
  return solve(a, cfg, reference);
}

void add_source_options(CLI::App& cmd, MatrixSource& src) {
  auto* file = cmd.add_option("--matrix", src.file, "Matrix Market input file");
  auto* n = cmd.add_option("--n", src.generated.n, "Generate an overlap-like matrix of this size");
  cmd.add_option("--density", src.generated.target_density, "Generator density")->needs(n);
  cmd.add_option("--decay", src.generated.decay, "Generator decay")->needs(n);
  cmd.add_option("--seed", src.generated.seed, "Generator seed")->needs(n);
  cmd.add_option("--condition", src.generated.condition_target, "Generator condition target")
      ->needs(n);
  file->excludes(n);
}

}  // namespace

Matrix MatrixSource::load() const {
  if (file) return load_matrix(*file);
  if (generated.n == 0) throw UsageError("either --matrix or --n is required");
  return gen_overlap(generated);
}

std::string MatrixSource::describe() const {
  if (file) return file->string();
  return "gen(n=" + std::to_string(generated.n) + ", density=" +
         format_double(generated.target_density) + ", decay=" + format_double(generated.decay) +
         ", seed=" + std::to_string(generated.seed) +
         ", condition=" + format_double(generated.condition_target) + ")";
}

std::string_view to_string(SweepMode m) noexcept {
  return m == SweepMode::all_arithmetic ? "all-arithmetic" : "storage-only";
}

SweepMode parse_sweep_mode(std::string_view text) {
  if (text == "arith" || text == "all-arithmetic") return SweepMode::all_arithmetic;
  if (text == "storage" || text == "storage-only") return SweepMode::storage_only;
  throw UsageError("unknown sweep mode '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
  if (formats.empty()) throw UsageError("sweep needs at least one format");
  if (p_values.empty()) throw UsageError("sweep needs at least one p");
  for (int p : p_values)
    if (p < 1) throw UsageError("p must be >= 1");
  for (const auto& f : formats) ArithmeticModel::parse(f);
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
  if (out_dir.empty()) throw UsageError("sweep needs an output directory");
}

std::string cell_file_stem(int p, SweepMode mode, const std::string& format) {
  std::string f = format;
  std::replace(f.begin(), f.end(), ':', '-');
  return "p" + std::to_string(p) + "_" + std::string(to_string(mode)) + "_" + f;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const Matrix a = spec.source.load();

  // References depend only on p; computed once and shared read-only.
  std::map<int, std::optional<Matrix>> references;
  for (int p : spec.p_values) {
    references[p] = spec.reference_oracle ? std::optional<Matrix>(reference_inv_proot(a, p))
                                          : std::nullopt;
  }

  struct Cell {
    int p;
    std::string format;
  };
  std::vector<Cell> cells;
  for (int p : spec.p_values)
    for (const auto& f : spec.formats) cells.push_back({p, f});

  std::vector<SweepRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& cell = cells[i];
        const ArithmeticModel model = ArithmeticModel::parse(cell.format);
        const SolveTrace trace = run_cell(a, spec, cell.p, model, references.at(cell.p));
        write_file(spec.out_dir / (cell_file_stem(cell.p, spec.mode, cell.format) + ".csv"),
                   [&](std::ostream& out) { write_trace_csv(out, trace); });
        const TwoPhaseSummary s = summarize(trace);
        rows[i] = SweepRow{cell.p,          spec.mode,    cell.format, trace.outcome,
                           s.plateau_level, s.phase1_end, trace.last().k};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(spec.jobs);
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < std::min(threads, cells.size()); ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  write_file(spec.out_dir / "summary.csv", [&](std::ostream& out) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& r : rows) {
      out << r.p << ',' << to_string(r.mode) << ',' << r.format << ',' << to_string(r.outcome)
          << ',' << format_double(r.plateau) << ',' << r.phase1_end << ',' << r.iters << '\n';
    }
  });
  return rows;
}

ValidateReport run_validate(const ValidateOptions& opts) {
  const Matrix a = opts.source.load();
  SolverConfig cfg;
  cfg.p = opts.p;
  cfg.max_iters = opts.max_iters;
  cfg.residual_tol = opts.residual_tol;
  const SolveTrace trace = solve(a, cfg);
  const Matrix reference = reference_inv_proot(a, opts.p);

  ValidateReport report;
  report.outcome = trace.outcome;
  report.iterations = trace.last().k;
  report.solver_residual = trace.last().residual_fro;
  report.oracle_residual = residual_frobenius(reference, a, opts.p);
  report.gap = trace.result.all_finite() ? norm_frobenius(trace.result - reference)
                                         : std::numeric_limits<double>::infinity();
  return report;
}

int cmd_gen(const GenOptions& opts, std::ostream& out) {
  const Matrix m = gen_overlap(opts.spec);
  save_matrix(m, opts.out);
  out << "wrote " << opts.out.string() << " (n=" << m.n() << ", density=" << format_double(density(m))
      << ")\n";
  return kSuccess;
}

int cmd_solve(const SolveOptions& opts, std::ostream& out) {
  const Matrix a = opts.source.load();
  std::optional<Matrix> reference;
  if (opts.reference_oracle) reference = reference_inv_proot(a, opts.config.p);
  const SolveTrace trace = solve(a, opts.config, reference);
  if (opts.trace_csv) {
    write_file(*opts.trace_csv, [&](std::ostream& o) { write_trace_csv(o, trace); });
  }
  if (opts.trace_json) {
    write_file(*opts.trace_json, [&](std::ostream& o) { write_trace_json(o, trace); });
  }
  const TwoPhaseSummary s = summarize(trace);
  for (const auto& w : trace.warnings) out << "warning: " << w << '\n';
  out << "outcome: " << to_string(trace.outcome) << '\n'
      << "iterations: " << trace.last().k << '\n'
      << "final_residual: " << format_double(trace.last().residual_fro) << '\n'
      << "plateau: " << format_double(s.plateau_level) << '\n'
      << "phase1_end: " << s.phase1_end << '\n'
      << "contraction: " << format_double(trace.contraction) << '\n';
  if (trace.last().error_fro) out << "final_error: " << format_double(*trace.last().error_fro) << '\n';
  return is_failure(trace.outcome) ? kNumericalFailure : kSuccess;
}

int cmd_sweep(const SweepSpec& spec, std::ostream& out) {
  const auto rows = run_sweep(spec);
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << to_string(r.mode) << ',' << r.format << ',' << to_string(r.outcome) << ','
        << format_double(r.plateau) << ',' << r.phase1_end << ',' << r.iters << '\n';
  }
  return kSuccess;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
  const ValidateReport r = run_validate(opts);
  out << "outcome: " << to_string(r.outcome) << '\n'
      << "iterations: " << r.iterations << '\n'
      << "gap_fro: " << format_double(r.gap) << '\n'
      << "solver_residual: " << format_double(r.solver_residual) << '\n'
      << "oracle_residual: " << format_double(r.oracle_residual) << '\n';
  if (!(r.gap <= opts.max_gap)) {
    out << "FAIL: gap exceeds " << format_double(opts.max_gap) << '\n';
    return kNumericalFailure;
  }
  out << "OK\n";
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse matrix p-th roots under simulated reduced precision"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic overlap-like SPD matrix");
  gen_cmd->add_option("--n", gen.spec.n, "Dimension")->required();
  gen_cmd->add_option("--density", gen.spec.target_density, "Fraction of non-zeros in (0, 1]");
  gen_cmd->add_option("--decay", gen.spec.decay, "Off-diagonal decay rate");
  gen_cmd->add_option("--seed", gen.spec.seed, "Random seed");
  gen_cmd->add_option("--condition", gen.spec.condition_target,
                      "Upper bound on the condition number");
  gen_cmd->add_option("--out", gen.out, "Output .mtx path")->required();

  SolveOptions solve_opts;
  std::string arith = "exact";
  std::string storage = "exact";
  std::vector<std::string> escalate;
  bool no_stop = false;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solve and write its trace");
  add_source_options(*solve_cmd, solve_opts.source);
  solve_cmd->add_option("--p", solve_opts.config.p, "Root order");
  solve_cmd->add_option("--arith", arith, "Arithmetic model");
  solve_cmd->add_option("--storage", storage, "Storage model");
  solve_cmd->add_option("--tol", solve_opts.config.residual_tol, "Residual target");
  solve_cmd->add_option("--max-iters", solve_opts.config.max_iters, "Iteration cap");
  solve_cmd->add_option("--window", solve_opts.config.stagnation_window, "Stagnation window");
  solve_cmd->add_option("--factor", solve_opts.config.stagnation_factor, "Stagnation factor");
  solve_cmd->add_option("--escalate", escalate, "Escalation schedule, e.g. single,exact")
      ->delimiter(',');
  solve_cmd->add_flag("--no-stagnation-stop", no_stop, "Keep iterating after stagnation");
  solve_cmd->add_option("--trace", solve_opts.trace_csv, "Trace CSV output");
  solve_cmd->add_option("--json", solve_opts.trace_json, "JSON sidecar output");
  std::string reference;
  solve_cmd->add_option("--reference", reference, "'oracle' to add the error column")
      ->check(CLI::IsMember({"oracle"}));

  SweepSpec sweep;
  std::string mode = "arith";
  std::string sweep_reference;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a precision sweep");
  add_source_options(*sweep_cmd, sweep.source);
  sweep_cmd->add_option("--p", sweep.p_values, "Root orders")->delimiter(',');
  sweep_cmd->add_option("--mode", mode, "arith | storage");
  sweep_cmd->add_option("--formats", sweep.formats, "Format grid")->delimiter(',')->required();
  sweep_cmd->add_option("--max-iters", sweep.max_iters, "Iteration cap");
  sweep_cmd->add_option("--tol", sweep.residual_tol, "Residual target");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Parallel cells");
  sweep_cmd->add_option("--reference", sweep_reference, "'oracle' to add the error column")
      ->check(CLI::IsMember({"oracle"}));

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Compare an exact solve with the oracle");
  add_source_options(*validate_cmd, validate.source);
  validate_cmd->add_option("--p", validate.p, "Root order");
  validate_cmd->add_option("--tol", validate.residual_tol, "Residual target");
  validate_cmd->add_option("--max-iters", validate.max_iters, "Iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (solve_cmd->parsed()) {
      solve_opts.config.arith = ArithmeticModel::parse(arith);
      solve_opts.config.storage = ArithmeticModel::parse(storage);
      for (const auto& m : escalate) solve_opts.config.escalation_schedule.push_back(ArithmeticModel::parse(m));
      solve_opts.config.stop_on_stagnation = !no_stop;
      solve_opts.reference_oracle = reference == "oracle";
      return cmd_solve(solve_opts, out);
    }
    if (sweep_cmd->parsed()) {
      sweep.mode = parse_sweep_mode(mode);
      sweep.reference_oracle = sweep_reference == "oracle";
      return cmd_sweep(sweep, out);
    }
    if (validate_cmd->parsed()) return cmd_validate(validate, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NotSpdError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace invroot::cli
