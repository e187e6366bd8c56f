#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invroot/arith_model.hpp"
#include "invroot/matrix.hpp"

namespace invroot {

struct SolverConfig {
  /// Root order; the solver approximates A^(-1/p).
  int p = 2;
  /// Model for every scalar op inside an iteration.
  ArithmeticModel arith;
  /// Model applied to A once and to every stored iterate.
  ArithmeticModel storage;
  int max_iters = 100;
  /// Target for the exact residual ||I - C^p A||_F.
  double residual_tol = 1e-12;
  int stagnation_window = 5;
  double stagnation_factor = 0.9;
  /// Models to switch `arith` to, in order, each time progress stagnates.
  /// Each entry must refine the one before it (the first refines `arith`).
  std::vector<ArithmeticModel> escalation_schedule;
  /// End the run (outcome `stagnated`) when progress stalls and no
  /// escalation step is left. When false the run continues to max_iters.
  bool stop_on_stagnation = true;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

enum class Outcome { converged, iteration_limit, diverged, non_finite, stagnated };

std::string_view to_string(Outcome o) noexcept;

struct IterationRecord {
  int k = 0;
  double residual_fro = 0.0;
  std::optional<double> error_fro;
  /// ||C_k - C_{k-1}||_F; zero for k = 0.
  double delta_fro = 0.0;
  std::string active_arith;
  std::string active_storage;
};

struct SolveTrace {
  SolverConfig config;
  std::vector<IterationRecord> records;
  Outcome outcome = Outcome::iteration_limit;
  Matrix result;
  /// ||I - C_0^p A||_2 estimate for the stored initial guess.
  double contraction = 0.0;
  /// Iteration indices k at which the arithmetic model was escalated; the
  /// iterate C_{k+1} is the first one computed with the new model.
  std::vector<int> escalations;
  std::vector<std::string> warnings;

  const IterationRecord& last() const { return records.back(); }
};

/// C_0 = A^T / (||A||_1 ||A||_inf) in binary64. Throws std::invalid_argument
/// for the zero matrix.
Matrix init_c0(const Matrix& a);

/// ||I - C_0^p A||_2 estimated in binary64. Values >= 1 mean the
/// convergence guarantee does not hold for this starting point.
double check_contraction(const Matrix& a, const Matrix& c0, int p);

/// C_{k+1} = ((p+1) C - C^(p+1) A) / p. C^(p+1) is built by sequential
/// left multiplication, all under `arith`; the result is quantized under
/// `storage`.
Matrix iterate_once(const Matrix& c, const Matrix& a, int p, const ArithmeticModel& arith,
                    const ArithmeticModel& storage);

/// ||I - C^p A||_F in binary64; non-finite entries give inf/NaN rather than
/// throwing.
double residual_frobenius(const Matrix& c, const Matrix& a, int p);

/// Runs the iteration from init_c0 until the residual target, the iteration
/// cap, divergence (residual above 10x its running minimum and above 1),
/// non-finite values, or stagnation. `reference` enables the error column.
///
/// Stagnation: once the step size ||C_k - C_{k-1}||_F has peaked under the
/// current model, it fails to shrink by `stagnation_factor` across
/// `stagnation_window` iterations. With escalation steps left the solver
/// switches arithmetic and continues from C_k.
SolveTrace solve(const Matrix& a, const SolverConfig& cfg,
                 const std::optional<Matrix>& reference = std::nullopt);

struct TwoPhaseSummary {
  /// First k whose residual is within 2x of the plateau.
  int phase1_end = 0;
  /// Smallest finite residual in the trace.
  double plateau_level = 0.0;
};

/// Throws std::invalid_argument for traces with fewer than three records.
TwoPhaseSummary two_phase_summary(const SolveTrace& trace);

/// Same quantities as two_phase_summary but defined for any non-empty trace.
TwoPhaseSummary summarize(const SolveTrace& trace);

}  // namespace invroot
