#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace invroot {

/// Two's-complement fixed-point format: one sign bit, `int_bits` integer
/// bits and `frac_bits` fractional bits. Out-of-range results saturate.
///
/// The representable set is the grid k * 2^-frac_bits for integer k in
/// [-2^(int_bits+frac_bits), 2^(int_bits+frac_bits) - 1]. Total width is
/// capped at 53 bits so every grid value is exact in binary64 and every raw
/// value fits an int64.
class FixedFormat {
 public:
  static constexpr int kMaxIntBits = 32;
  static constexpr int kMaxFracBits = 52;
  static constexpr int kMaxTotalBits = 53;

  FixedFormat(int int_bits, int frac_bits);

  int int_bits() const noexcept { return int_bits_; }
  int frac_bits() const noexcept { return frac_bits_; }

  std::int64_t raw_min() const noexcept { return -(std::int64_t{1} << (int_bits_ + frac_bits_)); }
  std::int64_t raw_max() const noexcept { return (std::int64_t{1} << (int_bits_ + frac_bits_)) - 1; }

  double min_value() const noexcept;
  double max_value() const noexcept;
  double step() const noexcept;

  /// `fixed:i<I>f<F>`
  std::string to_string() const;

  friend bool operator==(const FixedFormat&, const FixedFormat&) = default;

 private:
  int int_bits_;
  int frac_bits_;
};

/// Parses `fixed:i<I>f<F>`, or `fixed:f<F>` with the default 13 integer bits.
FixedFormat parse_fixed_format(std::string_view text);

inline constexpr int kDefaultFixedIntBits = 13;

/// Grid index of the nearest representable value (ties to even), saturated.
/// Throws DivergenceError for non-finite input.
std::int64_t to_raw(double x, const FixedFormat& fmt);
double from_raw(std::int64_t raw, const FixedFormat& fmt) noexcept;

/// Saturating grid arithmetic on raw values; exact up to the final rounding.
std::int64_t raw_add(std::int64_t a, std::int64_t b, const FixedFormat& fmt) noexcept;
std::int64_t raw_mul(std::int64_t a, std::int64_t b, const FixedFormat& fmt) noexcept;

/// round(x * 2^F) / 2^F, saturated to the representable range.
double to_fixed(double x, const FixedFormat& fmt);
double fixed_add(double a, double b, const FixedFormat& fmt);
double fixed_sub(double a, double b, const FixedFormat& fmt);
double fixed_mul(double a, double b, const FixedFormat& fmt);

}  // namespace invroot
