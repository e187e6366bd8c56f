#pragma once

#include <filesystem>
#include <iosfwd>

#include "invroot/matrix.hpp"

namespace invroot {

/// Reads a square real Matrix Market file, `coordinate` or `array`, with
/// `general` or `symmetric` storage. Symmetric files are expanded to dense.
/// Throws ParseError (with a line number) on malformed input and for
/// non-square matrices.
Matrix read_matrix_market(std::istream& in);
Matrix load_matrix(const std::filesystem::path& path);

/// Writes `coordinate real general` (or `symmetric` when the matrix is
/// exactly symmetric) with 17 significant digits, zeros omitted.
void write_matrix_market(std::ostream& out, const Matrix& m);
void save_matrix(const Matrix& m, const std::filesystem::path& path);

}  // namespace invroot
