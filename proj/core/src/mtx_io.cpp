#include "invroot/mtx_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  }
  return value;
}

// Next non-comment, non-blank line; false at EOF.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split(line);
    if (toks.empty() || toks.front().front() == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market input", 1);
  ++line_no;
  const auto header = split(line);
  if (header.size() != 5 || header[0] != "%%MatrixMarket" || lower(std::string(header[1])) != "matrix") {
    throw ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>' header", line_no);
  }
  const std::string format = lower(std::string(header[2]));
  const std::string field = lower(std::string(header[3]));
  const std::string symmetry = lower(std::string(header[4]));
  if (format != "coordinate" && format != "array") {
    throw ParseError("unsupported format '" + format + "'", line_no);
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("unsupported field '" + field + "'", line_no);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
  }
  const bool symmetric = symmetry == "symmetric";
  const bool coordinate = format == "coordinate";

  if (!next_data_line(in, line, line_no)) throw ParseError("missing size line", line_no + 1);
  const auto size = split(line);
  if (size.size() != (coordinate ? 3u : 2u)) throw ParseError("malformed size line", line_no);
  const auto rows = parse_number<std::size_t>(size[0], line_no);
  const auto cols = parse_number<std::size_t>(size[1], line_no);
  if (rows != cols) {
    throw ParseError("matrix is not square (" + std::to_string(rows) + "x" +
                         std::to_string(cols) + ")",
                     line_no);
  }
  const std::size_t n = rows;
  Matrix m(n);

  if (coordinate) {
    const auto nnz = parse_number<std::size_t>(size[2], line_no);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line, line_no)) {
        throw ParseError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(e),
                         line_no + 1);
      }
      const auto toks = split(line);
      if (toks.size() != 3) throw ParseError("expected 'row col value'", line_no);
      const auto i = parse_number<std::size_t>(toks[0], line_no);
      const auto j = parse_number<std::size_t>(toks[1], line_no);
      const double v = parse_number<double>(toks[2], line_no);
      if (i < 1 || i > n || j < 1 || j > n) throw ParseError("index out of range", line_no);
      if (symmetric && j > i) throw ParseError("symmetric entry above the diagonal", line_no);
      m(i - 1, j - 1) = v;
      if (symmetric) m(j - 1, i - 1) = v;
    }
  } else {
    // Column-major; symmetric files list only the lower triangle.
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = symmetric ? j : 0; i < n; ++i) {
        if (!next_data_line(in, line, line_no)) throw ParseError("too few array entries", line_no + 1);
        const auto toks = split(line);
        if (toks.size() != 1) throw ParseError("expected one value per line", line_no);
        const double v = parse_number<double>(toks[0], line_no);
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  }
  if (next_data_line(in, line, line_no)) throw ParseError("unexpected trailing data", line_no);
  return m;
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_matrix_market(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  const bool symmetric = m.is_symmetric();
  const std::size_t n = m.n();
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= (symmetric ? i : n - 1); ++j)
      if (m(i, j) != 0.0) ++nnz;

  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << n << ' ' << n << ' ' << nnz << '\n';
  char buf[64];
  // Column-major order, as most readers expect.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = symmetric ? j : 0; i < n; ++i) {
      const double v = m(i, j);
      if (v == 0.0) continue;
      auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
      out << (i + 1) << ' ' << (j + 1) << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
    }
  }
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix_market(out, m);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace invroot
