#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

#include "pa/error.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Probability stored as -ln p in a double; +inf is probability 0.
///
/// The reference representation: slowest of the probability types and the
/// one the others are checked against.
class LogPr {
 public:
  constexpr LogPr() = default;

  static constexpr LogPr zero() noexcept { return LogPr(std::numeric_limits<double>::infinity()); }
  static constexpr LogPr one() noexcept { return LogPr(0.0); }

  static LogPr from_real(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("LogPr::from_real requires 0 <= p <= 1");
    }
    return LogPr(-std::log(p) + 0.0);
  }

  static LogPr from_neg_log(double neg_log) {
    if (!(neg_log >= 0.0)) {
      throw std::domain_error("LogPr::from_neg_log requires a nonnegative value");
    }
    return LogPr(neg_log);
  }

  double to_real() const { return std::exp(-neg_log_); }
  double log_value() const { return -neg_log_; }
  constexpr double neg_log() const noexcept { return neg_log_; }
  constexpr bool is_zero() const noexcept { return neg_log_ == std::numeric_limits<double>::infinity(); }

  friend LogPr operator*(LogPr a, LogPr b) noexcept { return LogPr(a.neg_log_ + b.neg_log_); }

  /// Domain fault for a zero divisor or a quotient above 1.
  friend LogPr operator/(LogPr a, LogPr b) {
    if (b.is_zero()) {
      throw std::domain_error("LogPr division by zero");
    }
    const double quotient = a.neg_log_ - b.neg_log_;
    if (quotient < 0.0) {
      throw std::domain_error("LogPr quotient exceeds probability 1");
    }
    return LogPr(quotient);
  }

  /// lo - log1p(exp(-(hi - lo))); sums above 1 clamp to 1.
  friend LogPr operator+(LogPr a, LogPr b) noexcept {
    if (a.is_zero()) {
      return b;
    }
    if (b.is_zero()) {
      return a;
    }
    const double lo = a.neg_log_ < b.neg_log_ ? a.neg_log_ : b.neg_log_;
    const double hi = a.neg_log_ < b.neg_log_ ? b.neg_log_ : a.neg_log_;
    const double sum = lo - std::log1p(std::exp(lo - hi));
    return LogPr(sum > 0.0 ? sum : 0.0);
  }

  LogPr& operator*=(LogPr other) noexcept { return *this = *this * other; }
  LogPr& operator/=(LogPr other) { return *this = *this / other; }
  LogPr& operator+=(LogPr other) noexcept { return *this = *this + other; }

  /// Probability order, the reverse of neg_log order.
  friend std::strong_ordering operator<=>(LogPr a, LogPr b) noexcept {
    if (a.neg_log_ < b.neg_log_) return std::strong_ordering::greater;
    if (a.neg_log_ > b.neg_log_) return std::strong_ordering::less;
    return std::strong_ordering::equal;
  }
  friend constexpr bool operator==(LogPr a, LogPr b) noexcept { return a.neg_log_ == b.neg_log_; }

  /// 8-byte big-endian bit pattern of the double.
  void write(WireWriter& out) const { out.write_f64(neg_log_); }

  static LogPr read(WireReader& in) {
    const double neg_log = in.read_f64();
    if (!(neg_log >= 0.0)) {
      throw decode_error("LogPr value must be a nonnegative -ln p");
    }
    return LogPr(neg_log);
  }

 private:
  constexpr explicit LogPr(double neg_log) noexcept : neg_log_(neg_log) {}

  double neg_log_ = std::numeric_limits<double>::infinity();
};

}  // namespace pa
