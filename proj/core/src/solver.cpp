#include "invroot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

constexpr double kDivergenceGrowth = 10.0;

double frobenius_unchecked(const Matrix& m) {
  double sum = 0.0;
  for (double x : m.values()) sum += x * x;
  return std::sqrt(sum);
}

double difference_frobenius(const Matrix& a, const Matrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Progress monitor for the currently active model. Stagnation means the
// best residual has not improved by `factor` across `window` iterations and
// the step size has not shrunk by `factor` either; a step size that keeps
// growing (the slow start on small eigenvalues) is not stagnation.
class StagnationDetector {
 public:
  StagnationDetector(int window, double factor) : window_(window), factor_(factor) {}

  void reset() {
    deltas_.clear();
    best_.clear();
  }

  bool update(double delta, double residual) {
    best_.push_back(best_.empty() ? residual : std::min(best_.back(), residual));
    deltas_.push_back(delta);
    const std::size_t k = deltas_.size() - 1;
    const auto w = static_cast<std::size_t>(window_);
    if (k < w) return false;
    const bool residual_flat = !(best_[k] <= factor_ * best_[k - w]);
    // Zero steps mean the iterate is a fixed point of the active model.
    const bool stuck = delta == 0.0 && deltas_[k - w] == 0.0;
    const bool step_flat =
        stuck || (!(delta <= factor_ * deltas_[k - w]) && delta * factor_ <= deltas_[k - w]);
    return residual_flat && step_flat;
  }

 private:
  int window_;
  double factor_;
  std::vector<double> deltas_;
  std::vector<double> best_;
};

}  // namespace

void SolverConfig::validate() const {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be > 0");
  if (stagnation_window < 1) throw std::invalid_argument("stagnation_window must be >= 1");
  if (!(stagnation_factor > 0.0 && stagnation_factor <= 1.0)) {
    throw std::invalid_argument("stagnation_factor must be in (0, 1]");
  }
  const ArithmeticModel* prev = &arith;
  for (const auto& next : escalation_schedule) {
    if (!prev->is_refined_by(next)) {
      throw std::invalid_argument("escalation schedule must strictly increase precision: " +
                                  prev->to_string() + " -> " + next.to_string());
    }
    prev = &next;
  }
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::iteration_limit: return "iteration_limit";
    case Outcome::diverged: return "diverged";
    case Outcome::non_finite: return "non_finite";
    case Outcome::stagnated: return "stagnated";
  }
  return "unknown";
}

Matrix init_c0(const Matrix& a) {
  const double scale = norm_1(a) * norm_inf(a);
  if (scale == 0.0) throw std::invalid_argument("init_c0: zero matrix has no inverse root");
  return (1.0 / scale) * a.transpose();
}

double check_contraction(const Matrix& a, const Matrix& c0, int p) {
  if (a.n() != c0.n()) throw std::invalid_argument("check_contraction: dimension mismatch");
  const Matrix e = identity_minus(matmul(power(c0, p), a, ArithmeticModel::exact()));
  if (!e.all_finite()) throw DivergenceError("check_contraction: non-finite intermediate");
  return spectral_norm_est(e);
}

Matrix iterate_once(const Matrix& c, const Matrix& a, int p, const ArithmeticModel& arith,
                    const ArithmeticModel& storage) {
  if (c.n() != a.n()) throw std::invalid_argument("iterate_once: dimension mismatch");
  if (p < 1) throw std::invalid_argument("iterate_once: p must be >= 1");
  Matrix product = c;
  for (int i = 0; i < p; ++i) product = matmul(product, c, arith);
  product = matmul(product, a, arith);
  const double pd = static_cast<double>(p);
  const Matrix next = axpby((pd + 1.0) / pd, c, -1.0 / pd, product, arith);
  return quantize_matrix(next, storage);
}

double residual_frobenius(const Matrix& c, const Matrix& a, int p) {
  return frobenius_unchecked(identity_minus(matmul(power(c, p), a, ArithmeticModel::exact())));
}

SolveTrace solve(const Matrix& input, const SolverConfig& cfg,
                 const std::optional<Matrix>& reference) {
  cfg.validate();
  if (input.empty()) throw std::invalid_argument("solve: empty matrix");
  if (reference && reference->n() != input.n()) {
    throw std::invalid_argument("solve: reference dimension mismatch");
  }

  SolveTrace trace;
  trace.config = cfg;
  const Matrix a = quantize_matrix(input, cfg.storage);
  if (!a.is_symmetric()) throw std::invalid_argument("solve: matrix is not symmetric");

  Matrix c = quantize_matrix(init_c0(a), cfg.storage);
  trace.contraction = check_contraction(a, c, cfg.p);
  if (!(trace.contraction < 1.0)) {
    trace.warnings.push_back("initial guess violates ||I - C0^p A||_2 < 1 (estimate " +
                             std::to_string(trace.contraction) + ")");
  }

  ArithmeticModel arith = cfg.arith;
  std::size_t next_escalation = 0;
  const std::string storage_name = cfg.storage.to_string();
  auto record = [&](int k, double delta) {
    IterationRecord r;
    r.k = k;
    r.residual_fro = residual_frobenius(c, a, cfg.p);
    if (reference) r.error_fro = difference_frobenius(c, *reference);
    r.delta_fro = delta;
    r.active_arith = arith.to_string();
    r.active_storage = storage_name;
    trace.records.push_back(std::move(r));
    return trace.records.back().residual_fro;
  };

  double best = record(0, 0.0);
  StagnationDetector stagnation(cfg.stagnation_window, cfg.stagnation_factor);
  trace.outcome = Outcome::iteration_limit;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    Matrix next;
    try {
      next = iterate_once(c, a, cfg.p, arith, cfg.storage);
    } catch (const DivergenceError& e) {
      trace.warnings.push_back(e.what());
      trace.outcome = Outcome::non_finite;
      break;
    }
    const double delta = difference_frobenius(next, c);
    c = std::move(next);
    const double residual = record(k, delta);

    if (!std::isfinite(residual) || !c.all_finite()) {
      trace.outcome = Outcome::non_finite;
      break;
    }
    if (residual <= cfg.residual_tol) {
      trace.outcome = Outcome::converged;
      break;
    }
    if (residual > kDivergenceGrowth * best && residual > 1.0) {
      trace.outcome = Outcome::diverged;
      break;
    }
    best = std::min(best, residual);

    if (stagnation.update(delta, residual)) {
      if (next_escalation < cfg.escalation_schedule.size()) {
        arith = cfg.escalation_schedule[next_escalation++];
        trace.escalations.push_back(k);
        stagnation.reset();
      } else if (cfg.stop_on_stagnation) {
        trace.outcome = Outcome::stagnated;
        break;
      }
    }
  }
  trace.result = std::move(c);
  return trace;
}

TwoPhaseSummary summarize(const SolveTrace& trace) {
  if (trace.records.empty()) throw std::invalid_argument("summarize: empty trace");
  TwoPhaseSummary s;
  s.plateau_level = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) {
    if (std::isfinite(r.residual_fro)) s.plateau_level = std::min(s.plateau_level, r.residual_fro);
  }
  s.phase1_end = trace.records.back().k;
  for (const auto& r : trace.records) {
    if (r.residual_fro <= 2.0 * s.plateau_level) {
      s.phase1_end = r.k;
      break;
    }
  }
  return s;
}

TwoPhaseSummary two_phase_summary(const SolveTrace& trace) {
  if (trace.records.size() < 3) {
    throw std::invalid_argument("two_phase_summary: need at least 3 records");
  }
  return summarize(trace);
}

}  // namespace invroot
