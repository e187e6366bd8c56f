#include "invroot/fixedpoint.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "invroot/errors.hpp"
#include "invroot/random.hpp"

namespace invroot {
namespace {

const FixedFormat kI3F4(3, 4);

// Reference rounding onto the grid with long double, half to even.
double oracle_to_fixed(double x, const FixedFormat& f) {
  const long double scaled = static_cast<long double>(x) * std::ldexp(1.0L, f.frac_bits());
  long double r = std::floor(scaled);
  const long double diff = scaled - r;
  if (diff > 0.5L || (diff == 0.5L && std::fmod(r, 2.0L) != 0.0L)) r += 1.0L;
  r = std::max<long double>(r, static_cast<long double>(f.raw_min()));
  r = std::min<long double>(r, static_cast<long double>(f.raw_max()));
  return static_cast<double>(r / std::ldexp(1.0L, f.frac_bits()));
}

bool on_grid(double v, const FixedFormat& f) {
  const double scaled = std::ldexp(v, f.frac_bits());
  return scaled == std::nearbyint(scaled) && v >= f.min_value() && v <= f.max_value();
}

TEST(FixedFormat, RangeAndStep) {
  EXPECT_EQ(kI3F4.min_value(), -8.0);
  EXPECT_EQ(kI3F4.max_value(), 7.9375);
  EXPECT_EQ(kI3F4.step(), 0.0625);
  EXPECT_EQ(kI3F4.to_string(), "fixed:i3f4");
}

TEST(FixedFormat, RejectsInvalidWidths) {
  EXPECT_THROW(FixedFormat(0, 0), std::invalid_argument);
  EXPECT_THROW(FixedFormat(-1, 4), std::invalid_argument);
  EXPECT_THROW(FixedFormat(33, 4), std::invalid_argument);
  EXPECT_THROW(FixedFormat(13, 40), std::invalid_argument);
  EXPECT_NO_THROW(FixedFormat(0, 52));
  EXPECT_NO_THROW(FixedFormat(32, 20));
}

TEST(FixedFormat, Parse) {
  EXPECT_EQ(parse_fixed_format("fixed:i3f4"), kI3F4);
  EXPECT_EQ(parse_fixed_format("fixed:f18"), FixedFormat(13, 18));
  EXPECT_THROW(parse_fixed_format("fixed:i3"), ParseError);
  EXPECT_THROW(parse_fixed_format("fixed:i3f4:x"), ParseError);
  EXPECT_THROW(parse_fixed_format("fix:i3f4"), ParseError);
}

TEST(ToFixed, WorkedExamples) {
  EXPECT_EQ(to_fixed(0.0, kI3F4), 0.0);
  EXPECT_EQ(to_fixed(0.0, FixedFormat(13, 18)), 0.0);
  EXPECT_EQ(to_fixed(0.1, kI3F4), 0.125);
  EXPECT_EQ(to_fixed(100.0, kI3F4), 7.9375);
  EXPECT_EQ(to_fixed(-100.0, kI3F4), -8.0);
}

TEST(ToFixed, TiesGoToEven) {
  EXPECT_EQ(to_fixed(1.0 / 32, kI3F4), 0.0);
  EXPECT_EQ(to_fixed(3.0 / 32, kI3F4), 0.125);
  EXPECT_EQ(to_fixed(-1.0 / 32, kI3F4), 0.0);
  EXPECT_EQ(to_fixed(-3.0 / 32, kI3F4), -0.125);
}

TEST(ToFixed, NonFiniteInputThrows) {
  EXPECT_THROW(to_fixed(std::numeric_limits<double>::infinity(), kI3F4), DivergenceError);
  EXPECT_THROW(to_fixed(std::nan(""), kI3F4), DivergenceError);
}

TEST(FixedOps, WorkedExamples) {
  EXPECT_EQ(fixed_add(0.25, 0.5, kI3F4), 0.75);
  EXPECT_EQ(fixed_mul(0.0625, 0.0625, kI3F4), 0.0);
  EXPECT_EQ(fixed_mul(7.0, 7.0, kI3F4), 7.9375);
  EXPECT_EQ(fixed_mul(-8.0, 7.0, kI3F4), -8.0);
  EXPECT_EQ(fixed_add(7.0, 7.0, kI3F4), 7.9375);
  EXPECT_EQ(fixed_sub(-7.0, 7.0, kI3F4), -8.0);
}

TEST(FixedOps, MatchOracleAcrossFormats) {
  SplitMix64 rng(3);
  for (const auto& f : {kI3F4, FixedFormat(13, 18), FixedFormat(13, 8), FixedFormat(1, 30),
                        FixedFormat(20, 32), FixedFormat(0, 52), FixedFormat(13, 2)}) {
    for (int i = 0; i < 3000; ++i) {
      const double span = std::ldexp(1.0, f.int_bits() + 1);
      const double a = to_fixed((rng.uniform() - 0.5) * span, f);
      const double b = to_fixed((rng.uniform() - 0.5) * span * (i % 2 == 0 ? 1.0 : 1e-3), f);
      const long double prod = static_cast<long double>(a) * static_cast<long double>(b);
      const double mul = fixed_mul(a, b, f);
      // The long double product is exact when the operands carry <= 64 bits.
      if (2 * (f.int_bits() + f.frac_bits()) <= 62) {
        const long double scaled = prod * std::ldexp(1.0L, f.frac_bits());
        long double r = std::floor(scaled);
        const long double diff = scaled - r;
        if (diff > 0.5L || (diff == 0.5L && std::fmod(r, 2.0L) != 0.0L)) r += 1.0L;
        r = std::clamp<long double>(r, f.raw_min(), f.raw_max());
        EXPECT_EQ(mul, static_cast<double>(r / std::ldexp(1.0L, f.frac_bits())))
            << f.to_string() << " " << a << "*" << b;
      }
      EXPECT_TRUE(on_grid(mul, f)) << f.to_string();
      const double sum = fixed_add(a, b, f);
      EXPECT_EQ(sum, oracle_to_fixed(a + b, f)) << f.to_string();
      EXPECT_TRUE(on_grid(sum, f));
    }
  }
}

TEST(FixedProperties, IdempotentMonotoneBoundedSaturating) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int ib = static_cast<int>(rng.next() % 20);
    const int fb = 1 + static_cast<int>(rng.next() % 30);
    const FixedFormat f(ib, fb);
    double prev_x = -std::numeric_limits<double>::infinity();
    double prev_q = prev_x;
    std::vector<double> xs;
    for (int i = 0; i < 300; ++i)
      xs.push_back((rng.uniform() - 0.5) * std::ldexp(3.0, ib));
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
      const double q = to_fixed(x, f);
      EXPECT_EQ(q, oracle_to_fixed(x, f));
      EXPECT_EQ(to_fixed(q, f), q);
      if (x >= prev_x) {
        EXPECT_GE(q, prev_q);
      }
      prev_x = x;
      prev_q = q;
      if (x >= f.min_value() && x <= f.max_value()) {
        EXPECT_LE(std::abs(q - x), std::ldexp(1.0, -fb - 1));
      } else {
        EXPECT_LE(std::abs(q), std::max(std::abs(f.min_value()), f.max_value()));
      }
    }
  }
}

TEST(RawArithmetic, RoundTripsGrid) {
  for (std::int64_t r = kI3F4.raw_min(); r <= kI3F4.raw_max(); ++r) {
    EXPECT_EQ(to_raw(from_raw(r, kI3F4), kI3F4), r);
  }
  EXPECT_EQ(raw_add(kI3F4.raw_max(), 1, kI3F4), kI3F4.raw_max());
  EXPECT_EQ(raw_mul(16, 16, kI3F4), 16);
}

}  // namespace
}  // namespace invroot
