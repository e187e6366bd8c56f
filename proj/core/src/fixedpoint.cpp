#include "invroot/fixedpoint.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "invroot/errors.hpp"

namespace invroot {
namespace {

std::int64_t saturate(__int128 v, const FixedFormat& fmt) noexcept {
  if (v > fmt.raw_max()) return fmt.raw_max();
  if (v < fmt.raw_min()) return fmt.raw_min();
  return static_cast<std::int64_t>(v);
}

int parse_field(std::string_view& s, char tag, std::string_view whole) {
  if (s.empty() || s.front() != tag) {
    throw ParseError("bad fixed format '" + std::string(whole) + "'");
  }
  s.remove_prefix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw ParseError("bad fixed format '" + std::string(whole) + "'");
  }
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return value;
}

}  // namespace

FixedFormat::FixedFormat(int int_bits, int frac_bits) : int_bits_(int_bits), frac_bits_(frac_bits) {
  if (int_bits < 0 || int_bits > kMaxIntBits) {
    throw std::invalid_argument("integer bits must be in [0, 32], got " + std::to_string(int_bits));
  }
  if (frac_bits < 0 || frac_bits > kMaxFracBits) {
    throw std::invalid_argument("fractional bits must be in [0, 52], got " +
                                std::to_string(frac_bits));
  }
  if (int_bits + frac_bits < 1) {
    throw std::invalid_argument("fixed format needs at least one magnitude bit");
  }
  if (int_bits + frac_bits + 1 > kMaxTotalBits) {
    throw std::invalid_argument("fixed format wider than 53 bits: " + to_string());
  }
}

double FixedFormat::min_value() const noexcept { return from_raw(raw_min(), *this); }
double FixedFormat::max_value() const noexcept { return from_raw(raw_max(), *this); }
double FixedFormat::step() const noexcept { return std::ldexp(1.0, -frac_bits_); }

std::string FixedFormat::to_string() const {
  return "fixed:i" + std::to_string(int_bits_) + "f" + std::to_string(frac_bits_);
}

FixedFormat parse_fixed_format(std::string_view text) {
  std::string_view s = text;
  if (!s.starts_with("fixed:")) {
    throw ParseError("bad fixed format '" + std::string(text) + "'");
  }
  s.remove_prefix(6);
  int int_bits = kDefaultFixedIntBits;
  if (!s.empty() && s.front() == 'i') int_bits = parse_field(s, 'i', text);
  const int frac_bits = parse_field(s, 'f', text);
  if (!s.empty()) {
    throw ParseError("bad fixed format '" + std::string(text) + "'");
  }
  return {int_bits, frac_bits};
}

std::int64_t to_raw(double x, const FixedFormat& fmt) {
  if (!std::isfinite(x)) {
    throw DivergenceError("non-finite value cannot be represented in " + fmt.to_string());
  }
  const double scaled = std::nearbyint(std::ldexp(x, fmt.frac_bits()));
  if (scaled >= static_cast<double>(fmt.raw_max())) return fmt.raw_max();
  if (scaled <= static_cast<double>(fmt.raw_min())) return fmt.raw_min();
  return static_cast<std::int64_t>(scaled);
}

double from_raw(std::int64_t raw, const FixedFormat& fmt) noexcept {
  return std::ldexp(static_cast<double>(raw), -fmt.frac_bits());
}

std::int64_t raw_add(std::int64_t a, std::int64_t b, const FixedFormat& fmt) noexcept {
  return saturate(static_cast<__int128>(a) + b, fmt);
}

namespace {

template <class Wide>
Wide round_shift(Wide product, int shift) noexcept {
  // Arithmetic shift floors; fix up to nearest, ties to even.
  Wide q = product >> shift;
  const Wide rem = product - (q << shift);
  const Wide half = static_cast<Wide>(1) << (shift - 1);
  if (rem > half || (rem == half && (q & 1) != 0)) ++q;
  return q;
}

}  // namespace

std::int64_t raw_mul(std::int64_t a, std::int64_t b, const FixedFormat& fmt) noexcept {
  const int shift = fmt.frac_bits();
  if (fmt.int_bits() + fmt.frac_bits() <= 31) {
    // |a|, |b| <= 2^31, so the product fits in 63 bits.
    const std::int64_t product = a * b;
    if (shift == 0) return saturate(product, fmt);
    return saturate(round_shift(product, shift), fmt);
  }
  const __int128 product = static_cast<__int128>(a) * b;
  if (shift == 0) return saturate(product, fmt);
  return saturate(round_shift(product, shift), fmt);
}

double to_fixed(double x, const FixedFormat& fmt) { return from_raw(to_raw(x, fmt), fmt); }

double fixed_add(double a, double b, const FixedFormat& fmt) {
  return from_raw(raw_add(to_raw(a, fmt), to_raw(b, fmt), fmt), fmt);
}

double fixed_sub(double a, double b, const FixedFormat& fmt) {
  return from_raw(raw_add(to_raw(a, fmt), -to_raw(b, fmt), fmt), fmt);
}

double fixed_mul(double a, double b, const FixedFormat& fmt) {
  return from_raw(raw_mul(to_raw(a, fmt), to_raw(b, fmt), fmt), fmt);
}

}  // namespace invroot
