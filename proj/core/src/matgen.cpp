#include "invroot/matgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "invroot/random.hpp"

namespace invroot {
namespace {

struct Gershgorin {
  double lower;
  double upper;
};

Gershgorin gershgorin(const Matrix& m) {
  Gershgorin g{INFINITY, -INFINITY};
  for (std::size_t i = 0; i < m.n(); ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < m.n(); ++j)
      if (j != i) radius += std::abs(m(i, j));
    g.lower = std::min(g.lower, m(i, i) - radius);
    g.upper = std::max(g.upper, m(i, i) + radius);
  }
  return g;
}

// Lower-triangular Cholesky factor of m - shift*I, or nullopt if that matrix
// is not (numerically) positive definite.
std::optional<Matrix> cholesky(const Matrix& m, double shift) {
  const std::size_t n = m.n();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j) - shift;
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

// Solves L L^T x = b in place.
void cholesky_solve(const Matrix& l, std::vector<double>& x) {
  const std::size_t n = l.n();
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
}

double normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  s = std::sqrt(s);
  if (s == 0.0) return s;
  for (double& e : x) e /= s;
  return s;
}

double rayleigh(const Matrix& m, const std::vector<double>& x) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.n(); ++j) s += m(i, j) * x[j];
    r += x[i] * s;
  }
  return r;
}

std::vector<double> start_vector(std::size_t n) {
  SplitMix64 rng(0xA5A5'1234'0000'0001ULL);
  std::vector<double> x(n);
  for (double& e : x) e = rng.uniform() - 0.5;
  normalize(x);
  return x;
}

}  // namespace

bool is_positive_definite(const Matrix& m) { return cholesky(m, 0.0).has_value(); }

double min_eigenvalue_estimate(const Matrix& m, int max_iters, double tol) {
  const std::size_t n = m.n();
  if (n == 0) throw std::invalid_argument("min_eigenvalue_estimate: empty matrix");
  if (n == 1) return m(0, 0);
  const Gershgorin g = gershgorin(m);

  // Coarse upper estimate from power iteration on (upper*I - m).
  std::vector<double> x = start_vector(n);
  std::vector<double> y(n);
  for (int it = 0; it < 50; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = g.upper * x[i];
      for (std::size_t j = 0; j < n; ++j) s -= m(i, j) * x[j];
      y[i] = s;
    }
    // A vanishing product means x already spans an extreme eigenvector.
    if (normalize(y) == 0.0) break;
    x.swap(y);
  }
  const double coarse = rayleigh(m, x);

  // Walk the shift down until m - shift*I factors; the shift is then a
  // certified lower bound and close enough for inverse iteration to converge
  // quickly.
  double step = std::max(1e-3 * (g.upper - g.lower), 1e-12);
  std::optional<Matrix> factor;
  double shift = coarse;
  for (;;) {
    shift = coarse - step;
    factor = cholesky(m, shift);
    if (factor) break;
    step *= 2.0;
  }

  double estimate = coarse;
  for (int it = 0; it < max_iters; ++it) {
    cholesky_solve(*factor, x);
    normalize(x);
    const double next = rayleigh(m, x);
    const bool done = std::abs(next - estimate) <= tol * std::max(1.0, std::abs(next));
    estimate = next;
    if (done) break;
  }
  return estimate;
}

double max_eigenvalue_bound(const Matrix& m) {
  const std::size_t n = m.n();
  if (n == 0) throw std::invalid_argument("max_eigenvalue_bound: empty matrix");
  if (n == 1) return m(0, 0);
  const Gershgorin g = gershgorin(m);
  std::vector<double> x = start_vector(n);
  std::vector<double> y(n);
  // Power iteration on (m - lower*I), which is positive semidefinite.
  for (int it = 0; it < 300; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = -g.lower * x[i];
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
      y[i] = s;
    }
    // A vanishing product means x already spans an extreme eigenvector.
    if (normalize(y) == 0.0) break;
    x.swap(y);
  }
  const double estimate = rayleigh(m, x);
  Matrix negated = -1.0 * m;
  double step = std::max(1e-3 * (g.upper - g.lower), 1e-12);
  while (!cholesky(negated, -(estimate + step))) step *= 2.0;
  return estimate + step;
}

double density(const Matrix& m) {
  if (m.empty()) return 0.0;
  const auto nnz = std::count_if(m.values().begin(), m.values().end(),
                                 [](double x) { return x != 0.0; });
  return static_cast<double>(nnz) / static_cast<double>(m.values().size());
}

Matrix gen_overlap(const OverlapSpec& spec) {
  const std::size_t n = spec.n;
  if (n == 0) throw std::invalid_argument("gen_overlap: n must be positive");
  if (!(spec.target_density > 0.0 && spec.target_density <= 1.0)) {
    throw std::invalid_argument("gen_overlap: density must be in (0, 1]");
  }
  if (!(spec.condition_target > 1.0)) {
    throw std::invalid_argument("gen_overlap: condition target must be > 1");
  }
  if (!(spec.decay > 0.0) || !std::isfinite(spec.decay)) {
    throw std::invalid_argument("gen_overlap: decay must be positive");
  }
  const double nn = static_cast<double>(n);
  if (spec.target_density * nn < 1.0 - 1e-9) {
    throw std::invalid_argument("gen_overlap: density " + std::to_string(spec.target_density) +
                                " is below the diagonal-only density 1/" + std::to_string(n));
  }
  const std::size_t max_pairs = n * (n - 1) / 2;
  const auto pairs = std::min<std::size_t>(
      max_pairs, static_cast<std::size_t>(
                     std::llround(std::max(0.0, (spec.target_density * nn * nn - nn) / 2.0))));

  // Weighted sampling without replacement (exponential keys): keep the
  // `pairs` largest log(u)/w among all upper-triangle positions.
  SplitMix64 rng(spec.seed);
  struct Keyed {
    double key;
    std::uint32_t i;
    std::uint32_t j;
    bool operator>(const Keyed& o) const { return key > o.key; }
  };
  std::priority_queue<Keyed, std::vector<Keyed>, std::greater<>> heap;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double weight = std::exp(-spec.decay * static_cast<double>(j - i) / nn);
      const double key = std::log(rng.uniform()) / weight;
      if (pairs == 0) continue;
      const Keyed entry{key, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
      if (heap.size() < pairs) {
        heap.push(entry);
      } else if (key > heap.top().key) {
        heap.pop();
        heap.push(entry);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  chosen.reserve(heap.size());
  while (!heap.empty()) {
    chosen.emplace_back(heap.top().i, heap.top().j);
    heap.pop();
  }
  std::sort(chosen.begin(), chosen.end());

  Matrix s = Matrix::identity(n);
  for (const auto& [i, j] : chosen) {
    const double magnitude = rng.uniform();
    const double value = (rng.next() & 1) != 0 ? -magnitude : magnitude;
    s(i, j) = value;
    s(j, i) = value;
  }

  const double lowest = min_eigenvalue_estimate(s);
  const double floor = (max_eigenvalue_bound(s) - lowest) / (spec.condition_target - 1.0);
  double mu = std::max(0.0, floor - lowest);
  auto shifted = [&](double shift) {
    Matrix a = s;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
    return a;
  };
  Matrix a = shifted(mu);
  while (!is_positive_definite(a)) {
    mu += std::max(floor, 1e-12);
    a = shifted(mu);
  }
  if (mu > 0.0) {
    const double scale = 1.0 + mu;
    for (double& x : a.values()) x /= scale;
  }
  return a;
}

}  // namespace invroot
