#include "invroot/matgen.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "invroot/oracle.hpp"

namespace invroot {
namespace {

TEST(GenOverlap, SingletonIsOne) {
  EXPECT_EQ(gen_overlap({.n = 1, .target_density = 1.0}), Matrix{{1.0}});
}

TEST(GenOverlap, Deterministic) {
  const OverlapSpec spec{.n = 128, .target_density = 0.25, .seed = 7};
  EXPECT_EQ(gen_overlap(spec), gen_overlap(spec));
  OverlapSpec other = spec;
  other.seed = 8;
  EXPECT_NE(gen_overlap(spec), gen_overlap(other));
}

TEST(GenOverlap, PositiveDefiniteByJacobi) {
  const Matrix a = gen_overlap({.n = 128, .target_density = 0.25, .seed = 7});
  const auto e = jacobi_eigen(a);
  EXPECT_GT(e.eigenvalues.front(), 0.0);
  EXPECT_LE(e.eigenvalues.back() / e.eigenvalues.front(), 1.8 * (1 + 1e-6));
}

TEST(GenOverlap, StructuralInvariants) {
  for (std::size_t n : {2u, 5u, 16u, 64u, 200u, 256u}) {
    for (double d : {0.06, 0.25, 0.5, 1.0}) {
      if (d < 1.0 / static_cast<double>(n)) continue;
      const Matrix a = gen_overlap({.n = n, .target_density = d, .seed = n + 3});
      EXPECT_TRUE(a.is_symmetric());
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a(i, i), 1.0);
      for (double v : a.values()) {
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
      }
      // Whole symmetric pairs only, so tiny n cannot always land within 10%.
      const double pair_step = 2.0 / static_cast<double>(n * n);
      EXPECT_LE(std::abs(density(a) - d), std::max(0.1 * d, pair_step)) << n << " " << d;
      EXPECT_TRUE(is_positive_definite(a));
      if (n <= 64) {
        EXPECT_GT(jacobi_eigen(a).eigenvalues.front(), 0.0);
      }
    }
  }
}

TEST(GenOverlap, ConditionTargetRespected) {
  for (double kappa : {1.2, 1.8, 3.0, 10.0}) {
    const Matrix a = gen_overlap({.n = 48, .target_density = 0.3, .seed = 5, .condition_target = kappa});
    const auto e = jacobi_eigen(a);
    EXPECT_LE(e.eigenvalues.back() / e.eigenvalues.front(), kappa * (1 + 1e-6)) << kappa;
  }
}

TEST(GenOverlap, RejectsInfeasibleSpecs) {
  EXPECT_THROW(gen_overlap({.n = 10, .target_density = 0.05}), std::invalid_argument);
  EXPECT_THROW(gen_overlap({.n = 10, .target_density = 0.0}), std::invalid_argument);
  EXPECT_THROW(gen_overlap({.n = 10, .target_density = 1.5}), std::invalid_argument);
  EXPECT_THROW(gen_overlap({.n = 10, .target_density = 0.5, .decay = 0.0}), std::invalid_argument);
  EXPECT_THROW(gen_overlap({.n = 10, .target_density = 0.5, .condition_target = 1.0}),
               std::invalid_argument);
  EXPECT_THROW(gen_overlap({.n = 0}), std::invalid_argument);
}

TEST(DensityPresets, HalveAsSizeDoubles) {
  // Pair up the presets by size doubling and compare densities.
  int pairs = 0;
  for (const auto& small : kOverlapDensityPresets)
    for (const auto& big : kOverlapDensityPresets)
      if (big.n == 2 * small.n) {
        ++pairs;
        EXPECT_NEAR(big.density / small.density, 0.5, 0.01) << small.n;
      }
  EXPECT_EQ(pairs, 4);
}

TEST(Eigenvalues, EstimatesBracketJacobi) {
  const Matrix a = gen_overlap({.n = 60, .target_density = 0.4, .seed = 2, .condition_target = 5.0});
  const auto e = jacobi_eigen(a);
  EXPECT_NEAR(min_eigenvalue_estimate(a), e.eigenvalues.front(), 1e-9);
  const double hi = max_eigenvalue_bound(a);
  EXPECT_GE(hi, e.eigenvalues.back());
  EXPECT_LT(hi, e.eigenvalues.back() * 1.01);
  EXPECT_FALSE(is_positive_definite(Matrix::diagonal({1, -1e-3})));
}

}  // namespace
}  // namespace invroot
