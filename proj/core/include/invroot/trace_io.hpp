#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "invroot/solver.hpp"

namespace invroot {

inline constexpr const char* kTraceCsvHeader = "iter,residual_fro,error_fro,delta_fro,arith,storage";

/// Shortest decimal spelling that round-trips to the same double.
std::string format_double(double x);

/// One row per record under kTraceCsvHeader; `error_fro` is left empty when
/// no reference was supplied.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

/// Parses a trace CSV back into records. Throws ParseError on a wrong
/// header, malformed rows, or rows that break the record invariants
/// (negative residual, non-increasing iteration index).
std::vector<IterationRecord> read_trace_csv(std::istream& in);

/// JSON sidecar: config echo, outcome, contraction estimate, plateau
/// summary, escalation points and warnings.
void write_trace_json(std::ostream& out, const SolveTrace& trace);

}  // namespace invroot
