#include "invroot/arith_model.hpp"

#include "invroot/errors.hpp"

namespace invroot {

ArithmeticModel ArithmeticModel::parse(std::string_view text) {
  if (text == "exact") return exact();
  if (text.starts_with("fixed:")) return parse_fixed_format(text);
  if (text.starts_with("float:") || text.starts_with("half") || text.starts_with("single") ||
      text.starts_with("double")) {
    return parse_float_format(text);
  }
  throw ParseError("unknown arithmetic model '" + std::string(text) + "'");
}

double ArithmeticModel::quantize(double x) const {
  return with_ops(*this, [&](const auto& ops) { return ops.decode(ops.encode(x)); });
}

double ArithmeticModel::add(double a, double b) const {
  return with_ops(*this, [&](const auto& ops) {
    return ops.decode(ops.add(ops.encode(a), ops.encode(b)));
  });
}

double ArithmeticModel::mul(double a, double b) const {
  return with_ops(*this, [&](const auto& ops) {
    return ops.decode(ops.mul(ops.encode(a), ops.encode(b)));
  });
}

bool ArithmeticModel::is_refined_by(const ArithmeticModel& finer) const noexcept {
  if (is_exact()) return false;
  if (finer.is_exact()) return true;
  if (const auto* f = std::get_if<FloatFormat>(&kind_)) {
    const auto* g = std::get_if<FloatFormat>(&finer.kind_);
    return g != nullptr && g->mantissa_bits() > f->mantissa_bits() &&
           g->exponent_bits() >= f->exponent_bits();
  }
  const auto& f = std::get<FixedFormat>(kind_);
  const auto* g = std::get_if<FixedFormat>(&finer.kind_);
  return g != nullptr && g->frac_bits() > f.frac_bits() && g->int_bits() >= f.int_bits();
}

std::string ArithmeticModel::to_string() const {
  return visit([](const auto& k) -> std::string {
    using K = std::decay_t<decltype(k)>;
    if constexpr (std::is_same_v<K, ExactArithmetic>) {
      return "exact";
    } else {
      return k.to_string();
    }
  });
}

}  // namespace invroot
