#include "invroot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

constexpr int kMaxSweeps = 100;

}  // namespace

EigenDecomposition jacobi_eigen(const Matrix& input, double tol) {
  if (!input.is_symmetric()) throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");
  if (!input.all_finite()) throw DivergenceError("jacobi_eigen: non-finite matrix entry");
  const std::size_t n = input.n();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double threshold = tol * norm_frobenius(input);

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(p, q), smaller root for stability.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

Matrix reference_inv_proot(const Matrix& a, int p, double tol) {
  if (p < 1) throw std::invalid_argument("reference_inv_proot: p must be >= 1");
  const EigenDecomposition eig = jacobi_eigen(a, tol);
  const std::size_t n = a.n();
  std::vector<double> scale(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues[k];
    if (!(lambda > 0.0)) {
      throw NotSpdError("matrix is not positive definite (eigenvalue " + std::to_string(lambda) +
                        ")");
    }
    scale[k] = std::pow(lambda, -1.0 / p);
  }
  const Matrix& vec = eig.eigenvectors;
  Matrix out(n);
  // (v_ik * v_jk) * f_k is symmetric in i, j term by term.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += (vec(i, k) * vec(j, k)) * scale[k];
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace invroot
