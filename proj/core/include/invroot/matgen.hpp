#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "invroot/matrix.hpp"

namespace invroot {

/// Parameters of a synthetic overlap-like matrix.
struct OverlapSpec {
  std::size_t n = 0;
  /// Fraction of non-zero entries in (0, 1], diagonal included.
  double target_density = 0.25;
  /// Decay of the off-diagonal occupation weight exp(-decay * |i-j| / n).
  double decay = 4.0;
  std::uint64_t seed = 0;
  /// Upper bound on lambda_max / lambda_min after the positive-definite
  /// shift. The iteration amplifies rounding errors on eigenvalue pairs whose
  /// ratio exceeds roughly 2 (p = 1) to 3 (p = 4), so the default keeps every
  /// p up to 4 stable.
  double condition_target = 1.8;
};

/// Size/density pairs of the reference water-cluster overlap matrices. The
/// smallest size is quoted as both 786 and 768, the next as 1572 and 1536;
/// both spellings are listed.
struct DensityPreset {
  std::size_t n;
  double density;
};
inline constexpr std::array<DensityPreset, 6> kOverlapDensityPresets{{
    {768, 0.25},
    {786, 0.25},
    {1536, 0.124},
    {1572, 0.124},
    {3072, 0.062},
    {6144, 0.031},
}};

/// Deterministic symmetric positive definite matrix with unit diagonal and
/// entries in [-1, 1] whose non-zero pattern hits `target_density` (rounded
/// to the nearest whole number of symmetric pairs). Off-diagonal positions are
/// drawn by weighted sampling without replacement, favouring entries near the
/// diagonal; magnitudes are uniform in (0, 1) with random sign. The result is
/// shifted by mu*I so that its smallest eigenvalue is at least
/// (lambda_max - lambda_min) / (condition_target - 1), then rescaled by
/// 1/(1+mu).
///
/// Throws std::invalid_argument when the density cannot be realised for n
/// (below the diagonal-only density 1/n, or outside (0, 1]).
Matrix gen_overlap(const OverlapSpec& spec);

/// Fraction of entries that are non-zero.
double density(const Matrix& m);

/// Smallest eigenvalue estimate by shifted inverse power iteration
/// (Cholesky-based, symmetric input). The estimate is a Rayleigh quotient
/// and never lies below the true minimum by more than rounding.
double min_eigenvalue_estimate(const Matrix& m, int max_iters = 300, double tol = 1e-12);

/// Certified upper bound on the largest eigenvalue: a power-iteration
/// estimate pushed up until (bound*I - m) admits a Cholesky factorisation.
double max_eigenvalue_bound(const Matrix& m);

/// True iff a Cholesky factorisation of `m` succeeds.
bool is_positive_definite(const Matrix& m);

}  // namespace invroot
