#include "invroot/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "invroot/errors.hpp"
#include "invroot/random.hpp"

namespace invroot {
namespace {

void require_same_size(const Matrix& a, const Matrix& b, const char* op) {
  if (a.n() != b.n()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.n()) + " vs " + std::to_string(b.n()) + ")");
  }
}

void require_finite(const Matrix& m, const char* op) {
  if (!m.all_finite()) throw DivergenceError(std::string(op) + ": non-finite matrix entry");
}

template <class Ops>
std::vector<typename Ops::value_type> encode_all(const Matrix& m, const Ops& ops) {
  std::vector<typename Ops::value_type> out;
  out.reserve(m.values().size());
  for (double x : m.values()) out.push_back(ops.encode(x));
  return out;
}

template <class Ops>
Matrix matmul_kernel(const Matrix& a, const Matrix& b, const Ops& ops) {
  using V = typename Ops::value_type;
  const std::size_t n = a.n();
  const std::vector<V> qa = encode_all(a, ops);
  const std::vector<V> qb = encode_all(b, ops);
  const V zero = ops.encode(0.0);
  std::vector<V> acc(n);
  Matrix c(n);
  // i-k-j order: every acc[j] still sees its k terms in ascending order.
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), zero);
    for (std::size_t k = 0; k < n; ++k) {
      const V aik = qa[i * n + k];
      const V* brow = qb.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] = ops.add(acc[j], ops.mul(aik, brow[j]));
    }
    auto out = c.row(i);
    for (std::size_t j = 0; j < n; ++j) out[j] = ops.decode(acc[j]);
  }
  return c;
}

}  // namespace

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw std::invalid_argument("matrix data size " + std::to_string(data_.size()) +
                                " does not match n*n for n=" + std::to_string(n));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw std::invalid_argument("matrix rows must form a square");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix quantize_matrix(const Matrix& m, const ArithmeticModel& model) {
  if (model.is_exact()) return m;
  return with_ops(model, [&](const auto& ops) {
    Matrix out(m.n());
    auto dst = out.values();
    auto src = m.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = ops.decode(ops.encode(src[i]));
    return out;
  });
}

Matrix matmul(const Matrix& a, const Matrix& b, const ArithmeticModel& model) {
  require_same_size(a, b, "matmul");
  return with_ops(model, [&](const auto& ops) { return matmul_kernel(a, b, ops); });
}

Matrix axpby_identity(double alpha, const Matrix& m, double beta, const ArithmeticModel& model) {
  return with_ops(model, [&](const auto& ops) {
    const auto qa = ops.encode(alpha);
    const auto qb = ops.encode(beta);
    const auto zero = ops.encode(0.0);
    Matrix out(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) {
      for (std::size_t j = 0; j < m.n(); ++j) {
        const auto scaled = ops.mul(qa, ops.encode(m(i, j)));
        out(i, j) = ops.decode(ops.add(scaled, i == j ? qb : zero));
      }
    }
    return out;
  });
}

Matrix axpby(double alpha, const Matrix& x, double beta, const Matrix& y,
             const ArithmeticModel& model) {
  require_same_size(x, y, "axpby");
  return with_ops(model, [&](const auto& ops) {
    const auto qa = ops.encode(alpha);
    const auto qb = ops.encode(beta);
    Matrix out(x.n());
    auto dst = out.values();
    auto xs = x.values();
    auto ys = y.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = ops.decode(ops.add(ops.mul(qa, ops.encode(xs[i])), ops.mul(qb, ops.encode(ys[i]))));
    }
    return out;
  });
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "subtract");
  Matrix out(a.n());
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a.values()[i] - b.values()[i];
  return out;
}

Matrix operator*(double s, const Matrix& m) {
  Matrix out(m.n());
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = s * m.values()[i];
  return out;
}

Matrix identity_minus(const Matrix& m) {
  Matrix out(m.n());
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) out(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
  return out;
}

Matrix power(const Matrix& m, int p) {
  if (p < 1) throw std::invalid_argument("power: exponent must be >= 1");
  Matrix out = m;
  for (int i = 1; i < p; ++i) out = matmul_kernel(out, m, ExactOps{});
  return out;
}

double norm_1(const Matrix& m) {
  require_finite(m, "norm_1");
  std::vector<double> col(m.n(), 0.0);
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) col[j] += std::abs(m(i, j));
  return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double norm_inf(const Matrix& m) {
  require_finite(m, "norm_inf");
  double best = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i) {
    double sum = 0.0;
    for (double x : m.row(i)) sum += std::abs(x);
    best = std::max(best, sum);
  }
  return best;
}

double norm_frobenius(const Matrix& m) {
  require_finite(m, "norm_frobenius");
  double sum = 0.0;
  for (double x : m.values()) sum += x * x;
  return std::sqrt(sum);
}

double spectral_norm_est(const Matrix& m, int max_iters, double tol) {
  require_finite(m, "spectral_norm_est");
  const std::size_t n = m.n();
  if (n == 0) return 0.0;

  SplitMix64 rng(0x5EED'0F'5EC7'0A11ULL);
  std::vector<double> v(n), w(n), u(n);
  for (double& x : v) x = 1.0 + rng.uniform();
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& e : x) e /= s;
    return s;
  };
  normalize(v);

  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
      w[i] = s;
    }
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u[j] += m(i, j) * w[i];
    double wn = 0.0;
    for (double e : w) wn += e * e;
    const double next = std::sqrt(wn);
    if (next == 0.0) return sigma;
    const bool done = std::abs(next - sigma) <= tol * next;
    sigma = next;
    if (done) break;
    v.swap(u);
    normalize(v);
  }
  return sigma;
}

}  // namespace invroot
