#pragma once

#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pa/error.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Integer correction table for log-domain addition.
///
/// corr[d] = round(scale * ln(1 + exp(-d / scale))) for d = 0 .. d_max, where
/// d_max is the first difference whose correction rounds to 0. Adding two
/// probabilities with codes lo <= hi is then lo - corr[hi - lo].
class LogAddTable {
 public:
  explicit LogAddTable(std::uint32_t scale) : scale_(scale) {
    if (scale == 0) {
      throw std::invalid_argument("LogAddTable scale must be positive");
    }
    // Entries are stored in 16 bits whenever corr[0] fits, halving the
    // table's cache footprint for the default scale.
    const bool narrow = entry(scale, 0) <= std::numeric_limits<std::uint16_t>::max();
    for (std::uint64_t d = 0;; ++d) {
      const std::uint32_t value = entry(scale, d);
      if (narrow) {
        narrow_.push_back(static_cast<std::uint16_t>(value));
      } else {
        wide_.push_back(value);
      }
      if (value == 0) {
        break;
      }
    }
  }

  /// Direct evaluation of one entry.
  static std::uint32_t entry(std::uint32_t scale, std::uint64_t difference) {
    const double scaled = static_cast<double>(scale);
    return static_cast<std::uint32_t>(
        std::llround(scaled * std::log1p(std::exp(-static_cast<double>(difference) / scaled))));
  }

  /// Shared instance per scale, built on first use.
  template <std::uint32_t Scale>
  static const LogAddTable& instance() {
    static const LogAddTable table(Scale);
    return table;
  }

  std::uint32_t scale() const noexcept { return scale_; }
  std::uint64_t max_difference() const noexcept { return length() - 1; }

  std::uint32_t operator[](std::uint64_t difference) const noexcept {
    if (!narrow_.empty()) {
      return difference < narrow_.size() ? narrow_[difference] : 0;
    }
    return difference < wide_.size() ? wide_[difference] : 0;
  }

  std::vector<std::uint32_t> corrections() const {
    if (!narrow_.empty()) {
      return std::vector<std::uint32_t>(narrow_.begin(), narrow_.end());
    }
    return wide_;
  }

 private:
  std::size_t length() const noexcept { return narrow_.empty() ? wide_.size() : narrow_.size(); }

  std::uint32_t scale_;
  std::vector<std::uint16_t> narrow_;
  std::vector<std::uint32_t> wide_;
};

/// Probability stored as the unsigned code round(-Scale * ln p).
///
/// Code 0 is probability 1 and larger codes are smaller probabilities. The
/// all-ones code is reserved for probability 0. Multiplication adds codes and
/// saturates to zero; addition is integer-only via LogAddTable. Sums above 1
/// clamp to code 0.
template <std::unsigned_integral Code = std::uint32_t, std::uint32_t Scale = 65536>
  requires(!std::same_as<Code, bool>)
class FixedLog {
 public:
  using code_type = Code;
  static constexpr std::uint32_t scale = Scale;
  static constexpr Code kSentinel = std::numeric_limits<Code>::max();

  constexpr FixedLog() = default;

  static constexpr FixedLog from_code(Code code) noexcept { return FixedLog(code); }
  static constexpr FixedLog zero() noexcept { return FixedLog(kSentinel); }
  static constexpr FixedLog one() noexcept { return FixedLog(0); }

  static FixedLog from_real(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("FixedLog::from_real requires 0 <= p <= 1");
    }
    if (p == 0.0) {
      return zero();
    }
    return from_neg_log(-std::log(p));
  }

  /// Quantizes a nonnegative -ln p directly; saturates to the largest
  /// nonzero code.
  static FixedLog from_neg_log(double neg_log) {
    if (!(neg_log >= 0.0)) {
      throw std::domain_error("FixedLog::from_neg_log requires a nonnegative value");
    }
    const double scaled = std::round(neg_log * static_cast<double>(Scale));
    constexpr double kLargest = static_cast<double>(kSentinel - 1);
    if (scaled >= kLargest) {
      return FixedLog(kSentinel - 1);
    }
    return FixedLog(static_cast<Code>(scaled));
  }

  double to_real() const {
    if (is_zero()) {
      return 0.0;
    }
    return std::exp(-static_cast<double>(code_) / static_cast<double>(Scale));
  }

  /// ln p; -inf for zero.
  double log_value() const {
    if (is_zero()) {
      return -std::numeric_limits<double>::infinity();
    }
    return -static_cast<double>(code_) / static_cast<double>(Scale);
  }

  constexpr Code code() const noexcept { return code_; }
  constexpr bool is_zero() const noexcept { return code_ == kSentinel; }

  friend constexpr FixedLog operator*(FixedLog a, FixedLog b) noexcept {
    if (a.is_zero() || b.is_zero() || a.code_ >= kSentinel - b.code_) {
      return zero();
    }
    return FixedLog(static_cast<Code>(a.code_ + b.code_));
  }

  /// Code subtraction clamped at 0 (probability 1).
  friend FixedLog operator/(FixedLog a, FixedLog b) {
    if (b.is_zero()) {
      throw std::domain_error("FixedLog division by zero");
    }
    if (a.is_zero()) {
      return zero();
    }
    return FixedLog(a.code_ > b.code_ ? static_cast<Code>(a.code_ - b.code_) : Code{0});
  }

  friend FixedLog operator+(FixedLog a, FixedLog b) noexcept {
    if (a.is_zero()) {
      return b;
    }
    if (b.is_zero()) {
      return a;
    }
    const Code lo = a.code_ < b.code_ ? a.code_ : b.code_;
    const Code hi = a.code_ < b.code_ ? b.code_ : a.code_;
    const std::uint32_t correction = table()[static_cast<std::uint64_t>(hi - lo)];
    return FixedLog(lo > correction ? static_cast<Code>(lo - correction) : Code{0});
  }

  FixedLog& operator*=(FixedLog other) noexcept { return *this = *this * other; }
  FixedLog& operator/=(FixedLog other) { return *this = *this / other; }
  FixedLog& operator+=(FixedLog other) noexcept { return *this = *this + other; }

  /// Probability order: a smaller code is a larger probability.
  friend constexpr std::strong_ordering operator<=>(FixedLog a, FixedLog b) noexcept {
    return b.code_ <=> a.code_;
  }
  friend constexpr bool operator==(FixedLog a, FixedLog b) noexcept = default;

  static const LogAddTable& table() { return LogAddTable::instance<Scale>(); }

  /// The code as sizeof(Code) big-endian bytes.
  void write(WireWriter& out) const { out.write_uint(code_, sizeof(Code)); }

  static FixedLog read(WireReader& in) { return FixedLog(static_cast<Code>(in.read_uint(sizeof(Code)))); }

 private:
  constexpr explicit FixedLog(Code code) noexcept : code_(code) {}

  Code code_ = kSentinel;
};

using FixedLog32 = FixedLog<std::uint32_t, 65536>;

}  // namespace pa
