#include "invroot/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan" || s == "-nan") return NAN;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid number '" + s + "'", line);
  }
  return v;
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.residual_fro) << ','
        << (r.error_fro ? format_double(*r.error_fro) : std::string()) << ','
        << format_double(r.delta_fro) << ',' << r.active_arith << ',' << r.active_storage << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ParseError("expected trace header '" + std::string(kTraceCsvHeader) + "'", 1);
  }
  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ParseError("expected 6 fields", line_no);
    IterationRecord r;
    int k = 0;
    auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), k);
    if (ec != std::errc{} || ptr != f[0].data() + f[0].size()) {
      throw ParseError("invalid iteration index '" + f[0] + "'", line_no);
    }
    r.k = k;
    r.residual_fro = parse_double(f[1], line_no);
    if (!f[2].empty()) r.error_fro = parse_double(f[2], line_no);
    r.delta_fro = parse_double(f[3], line_no);
    r.active_arith = f[4];
    r.active_storage = f[5];
    if (r.residual_fro < 0.0) throw ParseError("negative residual", line_no);
    if (!records.empty() && r.k <= records.back().k) {
      throw ParseError("iteration index not increasing", line_no);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_trace_json(std::ostream& out, const SolveTrace& trace) {
  const SolverConfig& cfg = trace.config;
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& m : cfg.escalation_schedule) schedule.push_back(m.to_string());

  nlohmann::json j;
  j["config"] = {
      {"p", cfg.p},
      {"arith", cfg.arith.to_string()},
      {"storage", cfg.storage.to_string()},
      {"max_iters", cfg.max_iters},
      {"residual_tol", cfg.residual_tol},
      {"stagnation_window", cfg.stagnation_window},
      {"stagnation_factor", cfg.stagnation_factor},
      {"stop_on_stagnation", cfg.stop_on_stagnation},
      {"escalation_schedule", schedule},
  };
  j["n"] = trace.result.n();
  j["outcome"] = std::string(to_string(trace.outcome));
  j["iterations"] = trace.records.empty() ? 0 : trace.records.back().k;
  j["contraction"] = json_number(trace.contraction);
  if (!trace.records.empty()) {
    const TwoPhaseSummary s = summarize(trace);
    j["plateau"] = json_number(s.plateau_level);
    j["phase1_end"] = s.phase1_end;
    j["final_residual"] = json_number(trace.records.back().residual_fro);
  }
  j["escalations"] = trace.escalations;
  j["warnings"] = trace.warnings;
  out << j.dump(2) << '\n';
}

}  // namespace invroot
