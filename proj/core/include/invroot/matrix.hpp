#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "invroot/arith_model.hpp"

namespace invroot {

/// Dense square matrix of binary64 values in row-major order.
class Matrix {
 public:
  Matrix() = default;
  /// n x n zero matrix.
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  Matrix(std::size_t n, std::vector<double> row_major);
  /// Square matrix from nested rows; throws std::invalid_argument if ragged.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t n() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transpose() const;
  bool is_symmetric() const noexcept;
  bool all_finite() const noexcept;

  /// Bitwise-value equality (so -0.0 == 0.0, NaN != NaN).
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Elementwise quantization; the exact model returns the input unchanged.
/// Throws DivergenceError for a fixed-point model and non-finite entries.
Matrix quantize_matrix(const Matrix& m, const ArithmeticModel& model);

/// C[i][j] = sum over ascending k of A[i][k] * B[k][j], each product and each
/// partial sum rounded under `model`. Bit-deterministic.
Matrix matmul(const Matrix& a, const Matrix& b, const ArithmeticModel& model);

/// alpha * M + beta * I elementwise under `model`.
Matrix axpby_identity(double alpha, const Matrix& m, double beta, const ArithmeticModel& model);

/// alpha * X + beta * Y elementwise under `model`: mul, mul, then one add.
Matrix axpby(double alpha, const Matrix& x, double beta, const Matrix& y,
             const ArithmeticModel& model);

// Reference-precision helpers used by instrumentation; never quantized.
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
/// I - M
Matrix identity_minus(const Matrix& m);
/// M^p for p >= 1 by sequential left-to-right multiplication in binary64.
Matrix power(const Matrix& m, int p);

/// Max absolute column sum.
double norm_1(const Matrix& m);
/// Max absolute row sum.
double norm_inf(const Matrix& m);
double norm_frobenius(const Matrix& m);

/// Largest singular value via power iteration on M^T M, stopped when the
/// estimate changes by less than `tol` relative or after `max_iters` steps.
/// Returns 0 for the zero matrix.
double spectral_norm_est(const Matrix& m, int max_iters = 10000, double tol = 1e-14);

}  // namespace invroot
