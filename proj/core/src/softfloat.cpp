#include "invroot/softfloat.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

constexpr std::uint64_t kSignMask = 0x8000'0000'0000'0000ULL;
constexpr std::uint64_t kInfBits = 0x7FF0'0000'0000'0000ULL;
constexpr int kDoubleBias = 1023;

std::uint64_t biased_exponent_bits(int e) {
  return static_cast<std::uint64_t>(e + kDoubleBias) << 52;
}

bool consume(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

int consume_int(std::string_view& s, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw ParseError("bad float format '" + std::string(whole) + "'");
  }
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return value;
}

}  // namespace

FloatFormat::FloatFormat(int exponent_bits, int mantissa_bits, bool subnormals)
    : exponent_bits_(exponent_bits), mantissa_bits_(mantissa_bits), subnormals_(subnormals) {
  if (exponent_bits < 1 || exponent_bits > kMaxExponentBits) {
    throw std::invalid_argument("exponent bits must be in [1, 11], got " +
                                std::to_string(exponent_bits));
  }
  if (mantissa_bits < 0 || mantissa_bits > kMaxMantissaBits) {
    throw std::invalid_argument("mantissa bits must be in [0, 52], got " +
                                std::to_string(mantissa_bits));
  }
  round_unit_ = std::uint64_t{1} << (kMaxMantissaBits - mantissa_bits_);
  if (max_exponent() >= min_exponent()) {
    const std::uint64_t mantissa_ones = ((std::uint64_t{1} << mantissa_bits_) - 1)
                                        << (kMaxMantissaBits - mantissa_bits_);
    max_finite_bits_ = biased_exponent_bits(max_exponent()) | mantissa_ones;
    min_normal_bits_ = biased_exponent_bits(min_exponent());
  } else {
    // One exponent bit: there are no normal numbers, only subnormals.
    max_finite_bits_ = std::bit_cast<std::uint64_t>(max_finite());
    min_normal_bits_ = kInfBits;
  }
}

double FloatFormat::max_finite() const noexcept {
  if (max_exponent() >= min_exponent()) {
    return std::ldexp(2.0 - std::ldexp(1.0, -mantissa_bits_), max_exponent());
  }
  if (!subnormals_) return 0.0;
  return std::ldexp(std::ldexp(1.0, mantissa_bits_) - 1.0, min_exponent() - mantissa_bits_);
}

double FloatFormat::min_normal() const noexcept { return std::ldexp(1.0, min_exponent()); }

double FloatFormat::min_subnormal() const noexcept {
  return subnormals_ ? std::ldexp(1.0, min_exponent() - mantissa_bits_) : min_normal();
}

std::string FloatFormat::to_string() const {
  std::string s =
      "float:e" + std::to_string(exponent_bits_) + "m" + std::to_string(mantissa_bits_);
  if (!subnormals_) s += ":ftz";
  return s;
}

FloatFormat parse_float_format(std::string_view text) {
  std::string_view s = text;
  bool subnormals = true;
  if (s.ends_with(":ftz")) {
    subnormals = false;
    s.remove_suffix(4);
  }
  if (s == "half") return {5, 10, subnormals};
  if (s == "single") return {8, 23, subnormals};
  if (s == "double") return {11, 52, subnormals};
  if (!consume(s, "float:")) {
    throw ParseError("bad float format '" + std::string(text) + "'");
  }
  int exponent_bits = FloatFormat::kMaxExponentBits;
  if (consume(s, "e")) {
    exponent_bits = consume_int(s, text);
  }
  if (!consume(s, "m")) {
    throw ParseError("bad float format '" + std::string(text) + "'");
  }
  const int mantissa_bits = consume_int(s, text);
  if (!s.empty()) {
    throw ParseError("bad float format '" + std::string(text) + "'");
  }
  return {exponent_bits, mantissa_bits, subnormals};
}

double quantize(double x, const FloatFormat& fmt) noexcept {
  if (fmt.is_binary64()) return x;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const std::uint64_t sign = bits & kSignMask;
  const std::uint64_t mag = bits & ~kSignMask;
  if (mag >= kInfBits) return x;  // inf, nan

  if (mag >= fmt.min_normal_bits_) {
    std::uint64_t rounded = mag;
    if (fmt.round_unit_ > 1) {
      const std::uint64_t unit = fmt.round_unit_;
      const std::uint64_t lsb = (mag & unit) != 0 ? 1 : 0;
      rounded = (mag + unit / 2 - 1 + lsb) & ~(unit - 1);
    }
    if (rounded > fmt.max_finite_bits_) rounded = kInfBits;
    return std::bit_cast<double>(sign | rounded);
  }

  // Below the smallest normal: fixed quantum 2^(emin - M).
  const int quantum_exp = fmt.min_exponent() - fmt.mantissa_bits();
  double r = std::ldexp(std::nearbyint(std::ldexp(std::abs(x), -quantum_exp)), quantum_exp);
  if (!fmt.subnormals() && r < fmt.min_normal()) r = 0.0;
  if (r > fmt.max_finite()) r = std::numeric_limits<double>::infinity();
  return sign != 0 ? -r : r;
}

double float_add(double a, double b, const FloatFormat& fmt) noexcept {
  return quantize(a + b, fmt);
}

double float_sub(double a, double b, const FloatFormat& fmt) noexcept {
  return quantize(a - b, fmt);
}

double float_mul(double a, double b, const FloatFormat& fmt) noexcept {
  return quantize(a * b, fmt);
}

}  // namespace invroot
