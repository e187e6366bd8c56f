#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "invroot/fixedpoint.hpp"
#include "invroot/softfloat.hpp"

namespace invroot {

/// Reference binary64 arithmetic with no quantization.
struct ExactArithmetic {
  friend bool operator==(const ExactArithmetic&, const ExactArithmetic&) = default;
};

/// How every scalar operation of a computation is carried out: exactly, in a
/// custom float format, or in a fixed-point format. Non-exact models quantize
/// each operand on ingestion and each op result.
class ArithmeticModel {
 public:
  using Kind = std::variant<ExactArithmetic, FloatFormat, FixedFormat>;

  ArithmeticModel() = default;
  ArithmeticModel(ExactArithmetic) {}
  ArithmeticModel(FloatFormat fmt) : kind_(fmt) {}
  ArithmeticModel(FixedFormat fmt) : kind_(fmt) {}

  static ArithmeticModel exact() { return {}; }

  /// Accepts `exact` plus every float and fixed format spelling.
  static ArithmeticModel parse(std::string_view text);

  bool is_exact() const noexcept { return std::holds_alternative<ExactArithmetic>(kind_); }
  const Kind& kind() const noexcept { return kind_; }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), kind_);
  }

  double quantize(double x) const;
  double add(double a, double b) const;
  double mul(double a, double b) const;

  /// True when `finer` carries strictly more precision than this model:
  /// a same-kind format with more significant bits (and no less range), or
  /// exact arithmetic above any approximate one.
  bool is_refined_by(const ArithmeticModel& finer) const noexcept;

  std::string to_string() const;

  friend bool operator==(const ArithmeticModel&, const ArithmeticModel&) = default;

 private:
  Kind kind_;
};

// Scalar op policies used by the matrix kernels. `value_type` is the
// in-kernel representation; encode quantizes on ingestion.

struct ExactOps {
  using value_type = double;
  value_type encode(double x) const noexcept { return x; }
  double decode(value_type v) const noexcept { return v; }
  value_type add(value_type a, value_type b) const noexcept { return a + b; }
  value_type mul(value_type a, value_type b) const noexcept { return a * b; }
};

struct FloatOps {
  FloatFormat fmt;
  using value_type = double;
  value_type encode(double x) const noexcept { return invroot::quantize(x, fmt); }
  double decode(value_type v) const noexcept { return v; }
  value_type add(value_type a, value_type b) const noexcept { return invroot::quantize(a + b, fmt); }
  value_type mul(value_type a, value_type b) const noexcept { return invroot::quantize(a * b, fmt); }
};

struct FixedOps {
  FixedFormat fmt;
  using value_type = std::int64_t;
  value_type encode(double x) const { return to_raw(x, fmt); }
  double decode(value_type v) const noexcept { return from_raw(v, fmt); }
  value_type add(value_type a, value_type b) const noexcept { return raw_add(a, b, fmt); }
  value_type mul(value_type a, value_type b) const noexcept { return raw_mul(a, b, fmt); }
};

/// Calls `fn` with the op policy matching `model`.
template <class Fn>
decltype(auto) with_ops(const ArithmeticModel& model, Fn&& fn) {
  return model.visit([&](const auto& k) -> decltype(auto) {
    using K = std::decay_t<decltype(k)>;
    if constexpr (std::is_same_v<K, ExactArithmetic>) {
      return fn(ExactOps{});
    } else if constexpr (std::is_same_v<K, FloatFormat>) {
      return fn(FloatOps{k});
    } else {
      return fn(FixedOps{k});
    }
  });
}

}  // namespace invroot
