#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace invroot {

/// Binary floating-point format with a configurable exponent width and
/// number of stored mantissa bits. Values of every valid format are exactly
/// representable as IEEE binary64, which is what makes quantization through
/// a double well defined. Rounding is always round-to-nearest-even.
class FloatFormat {
 public:
  static constexpr int kMaxExponentBits = 11;
  static constexpr int kMaxMantissaBits = 52;

  /// Throws std::invalid_argument unless 1 <= exponent_bits <= 11 and
  /// 0 <= mantissa_bits <= 52.
  FloatFormat(int exponent_bits, int mantissa_bits, bool subnormals = true);

  static FloatFormat half() { return {5, 10}; }
  static FloatFormat single() { return {8, 23}; }
  static FloatFormat binary64() { return {11, 52}; }

  int exponent_bits() const noexcept { return exponent_bits_; }
  int mantissa_bits() const noexcept { return mantissa_bits_; }
  bool subnormals() const noexcept { return subnormals_; }

  int bias() const noexcept { return (1 << (exponent_bits_ - 1)) - 1; }
  /// Exponent of the smallest normal value, 1 - bias.
  int min_exponent() const noexcept { return 1 - bias(); }
  int max_exponent() const noexcept { return bias(); }

  double max_finite() const noexcept;
  double min_normal() const noexcept;
  double min_subnormal() const noexcept;

  /// True when quantization is the identity on binary64 values.
  bool is_binary64() const noexcept {
    return exponent_bits_ == 11 && mantissa_bits_ == 52 && subnormals_;
  }

  /// Canonical `float:e<E>m<M>` spelling (with an `:ftz` suffix when
  /// subnormals are flushed).
  std::string to_string() const;

  friend bool operator==(const FloatFormat&, const FloatFormat&) = default;

 private:
  friend double quantize(double x, const FloatFormat& fmt) noexcept;

  int exponent_bits_;
  int mantissa_bits_;
  bool subnormals_;
  // Cached bit patterns of |x| used by the rounding fast path.
  std::uint64_t round_unit_;
  std::uint64_t max_finite_bits_;
  std::uint64_t min_normal_bits_;
};

/// Parses `half`, `single`, `double`, `float:e<E>m<M>` or `float:m<M>`
/// (exponent width defaults to 11). An optional `:ftz` suffix disables
/// subnormals. Throws ParseError on malformed text and std::invalid_argument
/// on out-of-range widths.
FloatFormat parse_float_format(std::string_view text);

/// Nearest value representable in `fmt` (ties to even). Overflow gives a
/// signed infinity, underflow a signed zero, NaN stays NaN.
double quantize(double x, const FloatFormat& fmt) noexcept;

/// Each op is evaluated in binary64 and rounded once to `fmt`.
double float_add(double a, double b, const FloatFormat& fmt) noexcept;
double float_sub(double a, double b, const FloatFormat& fmt) noexcept;
double float_mul(double a, double b, const FloatFormat& fmt) noexcept;

}  // namespace invroot
