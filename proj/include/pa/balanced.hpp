#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "pa/error.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Single-precision significand with a 32-bit binary exponent.
///
/// Canonical form: either the zero (0, 0) or 0.5 <= |significand| < 1, and
/// the value is significand * 2^exponent. Every operation returns canonical
/// values. Significand arithmetic runs in double and is rounded back to
/// float, so each operation adds at most one single-precision rounding.
/// Values far outside double range are representable; infinities and NaN
/// are not.
class Balanced {
 public:
  /// Operands whose exponents differ by more than this are absorbed by add.
  static constexpr std::int64_t kAlignmentWindow = 25;

  constexpr Balanced() = default;

  static Balanced from_real(double x) {
    if (!std::isfinite(x)) {
      throw std::domain_error("Balanced::from_real requires a finite value");
    }
    return normalize(x, 0);
  }

  /// Canonicalizes significand * 2^exponent. Range fault if the resulting
  /// exponent does not fit 32 bits.
  static Balanced normalize(double significand, std::int64_t exponent) {
    if (significand == 0.0) {
      return Balanced();
    }
    int shift = 0;
    const double fraction = std::frexp(significand, &shift);
    auto rounded = static_cast<float>(fraction);
    std::int64_t result_exponent = exponent + shift;
    if (std::fabs(rounded) == 1.0F) {
      rounded *= 0.5F;
      ++result_exponent;
    }
    if (result_exponent > std::numeric_limits<std::int32_t>::max() ||
        result_exponent < std::numeric_limits<std::int32_t>::min()) {
      throw std::range_error("Balanced exponent " + std::to_string(result_exponent) +
                             " outside 32-bit range");
    }
    return Balanced(rounded, static_cast<std::int32_t>(result_exponent));
  }

  /// Exact when the value fits a double; overflow or underflow fault otherwise.
  double to_real() const {
    if (is_zero()) {
      return 0.0;
    }
    if (exponent_ > kMaxRealExponent) {
      throw std::overflow_error("Balanced value 2^" + std::to_string(exponent_) +
                                " exceeds double range");
    }
    if (exponent_ < kMinRealExponent) {
      throw std::underflow_error("Balanced value 2^" + std::to_string(exponent_) +
                                 " is below double range");
    }
    return std::ldexp(static_cast<double>(significand_), exponent_);
  }

  /// Natural log of |value|; -inf for zero. Never leaves double range.
  double log_magnitude() const {
    if (is_zero()) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::fabs(static_cast<double>(significand_))) +
           static_cast<double>(exponent_) * std::numbers::ln2;
  }

  constexpr float significand() const noexcept { return significand_; }
  constexpr std::int32_t exponent() const noexcept { return exponent_; }
  constexpr bool is_zero() const noexcept { return significand_ == 0.0F; }
  constexpr bool is_negative() const noexcept { return significand_ < 0.0F; }

  constexpr bool is_canonical() const noexcept {
    if (significand_ == 0.0F) {
      return exponent_ == 0;
    }
    const float magnitude = significand_ < 0.0F ? -significand_ : significand_;
    return magnitude >= 0.5F && magnitude < 1.0F;
  }

  friend Balanced operator-(Balanced value) {
    value.significand_ = -value.significand_;
    if (value.significand_ == 0.0F) {
      value.significand_ = 0.0F;
    }
    return value;
  }

  friend Balanced operator*(Balanced a, Balanced b) {
    if (a.is_zero() || b.is_zero()) {
      return Balanced();
    }
    return normalize(static_cast<double>(a.significand_) * static_cast<double>(b.significand_),
                     std::int64_t{a.exponent_} + b.exponent_);
  }

  friend Balanced operator/(Balanced a, Balanced b) {
    if (b.is_zero()) {
      throw std::domain_error("Balanced division by zero");
    }
    if (a.is_zero()) {
      return Balanced();
    }
    return normalize(static_cast<double>(a.significand_) / static_cast<double>(b.significand_),
                     std::int64_t{a.exponent_} - b.exponent_);
  }

  friend Balanced operator+(Balanced a, Balanced b) {
    if (a.is_zero()) {
      return b;
    }
    if (b.is_zero()) {
      return a;
    }
    if (a.exponent_ < b.exponent_) {
      std::swap(a, b);
    }
    const std::int64_t gap = std::int64_t{a.exponent_} - b.exponent_;
    if (gap > kAlignmentWindow) {
      return a;
    }
    // Both significands carry 24 bits and gap <= 25, so this sum is exact.
    const double sum = static_cast<double>(a.significand_) +
                       std::ldexp(static_cast<double>(b.significand_), static_cast<int>(-gap));
    return normalize(sum, a.exponent_);
  }

  friend Balanced operator-(Balanced a, Balanced b) { return a + (-b); }

  Balanced& operator*=(Balanced other) { return *this = *this * other; }
  Balanced& operator/=(Balanced other) { return *this = *this / other; }
  Balanced& operator+=(Balanced other) { return *this = *this + other; }
  Balanced& operator-=(Balanced other) { return *this = *this - other; }

  /// Orders by sign, then exponent, then significand; no conversion to double.
  friend constexpr std::strong_ordering operator<=>(Balanced a, Balanced b) {
    const int sign_a = a.sign();
    const int sign_b = b.sign();
    if (sign_a != sign_b) {
      return sign_a <=> sign_b;
    }
    if (sign_a == 0) {
      return std::strong_ordering::equal;
    }
    if (a.exponent_ != b.exponent_) {
      return sign_a > 0 ? a.exponent_ <=> b.exponent_ : b.exponent_ <=> a.exponent_;
    }
    if (a.significand_ < b.significand_) return std::strong_ordering::less;
    if (a.significand_ > b.significand_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend constexpr bool operator==(Balanced a, Balanced b) {
    return a.significand_ == b.significand_ && a.exponent_ == b.exponent_;
  }

  /// 4-byte float bit pattern then 4-byte two's-complement exponent, big-endian.
  void write(WireWriter& out) const {
    out.write_f32(significand_);
    out.write_i32(exponent_);
  }

  static Balanced read(WireReader& in) {
    Balanced value;
    value.significand_ = in.read_f32();
    value.exponent_ = in.read_i32();
    if (!std::isfinite(value.significand_) || !value.is_canonical() ||
        (std::signbit(value.significand_) && value.significand_ == 0.0F)) {
      throw decode_error("Balanced value is not in canonical form");
    }
    return value;
  }

  friend std::ostream& operator<<(std::ostream& out, Balanced value) {
    return out << value.significand_ << "*2^" << value.exponent_;
  }

 private:
  // 0.5 * 2^1025 overflows a double; 0.5 * 2^-1073 is the smallest subnormal.
  static constexpr std::int32_t kMaxRealExponent = 1024;
  static constexpr std::int32_t kMinRealExponent = -1073;

  constexpr Balanced(float significand, std::int32_t exponent)
      : significand_(significand), exponent_(exponent) {}

  constexpr int sign() const noexcept {
    return significand_ > 0.0F ? 1 : (significand_ < 0.0F ? -1 : 0);
  }

  float significand_ = 0.0F;
  std::int32_t exponent_ = 0;
};

}  // namespace pa
