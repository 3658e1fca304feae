#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "pa/balanced.hpp"
#include "pa/fixed_log.hpp"
#include "pa/log_pr.hpp"
#include "pa/sampling.hpp"

// Generic interface over the probability representations.
//
// Compile-time path: PrTraits<T> gives every backend the same static
// operation set {zero, one, from_real, to_real, to_log, mul, div, add, cmp}.
// Runtime path: PrBackend is a descriptor of function pointers over an
// opaque 8-byte PrValue, so one conformance suite and one benchmark binary
// cover every backend.
namespace pa {

template <class T>
struct PrTraits;

template <>
struct PrTraits<double> {
  static constexpr std::string_view name = "double";
  static constexpr double op_tolerance = 1e-12;
  static constexpr double add_tolerance = 1e-12;

  static double zero() noexcept { return 0.0; }
  static double one() noexcept { return 1.0; }
  static double from_real(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("double backend requires 0 <= p <= 1");
    }
    return p;
  }
  static double to_real(double value) noexcept { return value; }
  static double to_log(double value) { return std::log(value); }
  static double mul(double a, double b) noexcept { return a * b; }
  static double div(double a, double b) {
    if (b == 0.0) {
      throw std::domain_error("double backend division by zero");
    }
    return a / b;
  }
  static double add(double a, double b) noexcept { return std::min(a + b, 1.0); }
  static std::strong_ordering cmp(double a, double b) noexcept {
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

template <>
struct PrTraits<LogPr> {
  static constexpr std::string_view name = "logpr";
  static constexpr double op_tolerance = 1e-12;
  static constexpr double add_tolerance = 1e-12;

  static LogPr zero() noexcept { return LogPr::zero(); }
  static LogPr one() noexcept { return LogPr::one(); }
  static LogPr from_real(double p) { return LogPr::from_real(p); }
  static double to_real(LogPr value) { return value.to_real(); }
  static double to_log(LogPr value) { return value.log_value(); }
  static LogPr mul(LogPr a, LogPr b) noexcept { return a * b; }
  static LogPr div(LogPr a, LogPr b) { return a / b; }
  static LogPr add(LogPr a, LogPr b) noexcept { return a + b; }
  static std::strong_ordering cmp(LogPr a, LogPr b) noexcept { return a <=> b; }
};

template <>
struct PrTraits<Balanced> {
  static constexpr std::string_view name = "balanced";
  static constexpr double op_tolerance = 0x1.0p-22;
  static constexpr double add_tolerance = 0x1.0p-22;

  static Balanced zero() noexcept { return Balanced(); }
  static Balanced one() { return Balanced::from_real(1.0); }
  static Balanced from_real(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("balanced backend requires 0 <= p <= 1");
    }
    return Balanced::from_real(p);
  }
  static double to_real(Balanced value) { return value.to_real(); }
  static double to_log(Balanced value) { return value.log_magnitude(); }
  static Balanced mul(Balanced a, Balanced b) { return a * b; }
  static Balanced div(Balanced a, Balanced b) { return a / b; }
  static Balanced add(Balanced a, Balanced b) { return a + b; }
  static std::strong_ordering cmp(Balanced a, Balanced b) noexcept { return a <=> b; }
};

template <std::unsigned_integral Code, std::uint32_t Scale>
struct PrTraits<FixedLog<Code, Scale>> {
  using Value = FixedLog<Code, Scale>;
  static constexpr std::string_view name = "fixedlog";
  static constexpr double op_tolerance = 0.5 / Scale;
  static constexpr double add_tolerance = 2.0 / Scale;

  static Value zero() noexcept { return Value::zero(); }
  static Value one() noexcept { return Value::one(); }
  static Value from_real(double p) { return Value::from_real(p); }
  static double to_real(Value value) { return value.to_real(); }
  static double to_log(Value value) { return value.log_value(); }
  static Value mul(Value a, Value b) noexcept { return a * b; }
  static Value div(Value a, Value b) { return a / b; }
  static Value add(Value a, Value b) noexcept { return a + b; }
  static std::strong_ordering cmp(Value a, Value b) noexcept { return a <=> b; }
};

/// The backends in canonical order: native double first.
using PrBackendTypes = std::tuple<double, LogPr, Balanced, FixedLog32>;

/// Opaque 8-byte holder for one backend value.
struct PrValue {
  std::uint64_t bits = 0;
  friend constexpr bool operator==(PrValue, PrValue) = default;
};

template <class T>
  requires std::is_trivially_copyable_v<T> && (sizeof(T) <= sizeof(std::uint64_t))
PrValue pr_pack(T value) noexcept {
  PrValue packed;
  std::memcpy(&packed.bits, &value, sizeof(T));
  return packed;
}

template <class T>
  requires std::is_trivially_copyable_v<T> && (sizeof(T) <= sizeof(std::uint64_t))
T pr_unpack(PrValue packed) noexcept {
  T value;
  std::memcpy(static_cast<void*>(&value), &packed.bits, sizeof(T));
  return value;
}

struct PrBackend {
  std::string_view name;
  /// Per-operation ln-domain tolerance for conversions and multiplication.
  double op_tolerance = 0.0;
  /// Per-operation ln-domain tolerance for addition.
  double add_tolerance = 0.0;
  PrValue zero;
  PrValue one;
  PrValue (*from_real)(double) = nullptr;
  double (*to_real)(PrValue) = nullptr;
  double (*to_log)(PrValue) = nullptr;
  PrValue (*mul)(PrValue, PrValue) = nullptr;
  PrValue (*div)(PrValue, PrValue) = nullptr;
  PrValue (*add)(PrValue, PrValue) = nullptr;
  std::strong_ordering (*cmp)(PrValue, PrValue) = nullptr;
};

template <class T>
PrBackend make_backend() {
  using Traits = PrTraits<T>;
  PrBackend backend;
  backend.name = Traits::name;
  backend.op_tolerance = Traits::op_tolerance;
  backend.add_tolerance = Traits::add_tolerance;
  backend.zero = pr_pack(Traits::zero());
  backend.one = pr_pack(Traits::one());
  backend.from_real = [](double p) { return pr_pack(Traits::from_real(p)); };
  backend.to_real = [](PrValue v) { return Traits::to_real(pr_unpack<T>(v)); };
  backend.to_log = [](PrValue v) { return Traits::to_log(pr_unpack<T>(v)); };
  backend.mul = [](PrValue a, PrValue b) {
    return pr_pack(Traits::mul(pr_unpack<T>(a), pr_unpack<T>(b)));
  };
  backend.div = [](PrValue a, PrValue b) {
    return pr_pack(Traits::div(pr_unpack<T>(a), pr_unpack<T>(b)));
  };
  backend.add = [](PrValue a, PrValue b) {
    return pr_pack(Traits::add(pr_unpack<T>(a), pr_unpack<T>(b)));
  };
  backend.cmp = [](PrValue a, PrValue b) { return Traits::cmp(pr_unpack<T>(a), pr_unpack<T>(b)); };
  return backend;
}

/// double, logpr, balanced, fixedlog.
inline const std::vector<PrBackend>& pr_backends() {
  static const std::vector<PrBackend> backends = [] {
    return std::apply([](auto... tag) { return std::vector<PrBackend>{make_backend<decltype(tag)>()...}; },
                      PrBackendTypes{});
  }();
  return backends;
}

inline const PrBackend* find_backend(std::string_view name) {
  for (const auto& backend : pr_backends()) {
    if (backend.name == name) {
      return &backend;
    }
  }
  return nullptr;
}

/// Calls `visitor(std::type_identity<T>{})` for the backend type named `name`.
/// Returns false when no backend has that name.
template <class Visitor>
bool visit_backend_type(std::string_view name, Visitor&& visitor) {
  return std::apply(
      [&](auto... tag) {
        return ((PrTraits<decltype(tag)>::name == name
                     ? (visitor(std::type_identity<decltype(tag)>{}), true)
                     : false) ||
                ...);
      },
      PrBackendTypes{});
}

struct ConformanceCheck {
  std::string name;
  double observed = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct ConformanceReport {
  std::string backend;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<ConformanceCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& check) { return check.passed; });
  }

  const ConformanceCheck* check(std::string_view check_name) const {
    for (const auto& item : checks) {
      if (item.name == check_name) {
        return &item;
      }
    }
    return nullptr;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "conformance " << backend << " (samples=" << samples << ", seed=" << seed << ")\n";
    for (const auto& item : checks) {
      out << "  " << (item.passed ? "PASS" : "FAIL") << "  " << item.name
          << "  observed=" << item.observed << "  limit=" << item.limit << '\n';
    }
    out << "  " << (passed() ? "all checks passed" : "FAILED") << '\n';
    return out.str();
  }

  std::string to_key_values() const {
    std::ostringstream out;
    out.precision(17);
    out << "backend=" << backend << '\n' << "samples=" << samples << '\n' << "seed=" << seed << '\n';
    for (const auto& item : checks) {
      out << item.name << ".observed=" << item.observed << '\n';
      out << item.name << ".limit=" << item.limit << '\n';
      out << item.name << ".passed=" << (item.passed ? 1 : 0) << '\n';
    }
    out << "passed=" << (passed() ? 1 : 0) << '\n';
    return out.str();
  }
};

namespace pr_detail {

inline void record_error(ConformanceReport& report, std::string name, double observed, double limit) {
  const bool ok = std::isfinite(observed) && observed <= limit;
  report.checks.push_back({std::move(name), observed, limit, ok});
}

inline void record_count(ConformanceReport& report, std::string name, std::size_t violations) {
  report.checks.push_back({std::move(name), static_cast<double>(violations), 0.0, violations == 0});
}

}  // namespace pr_detail

/// Runs the algebraic and accuracy checks against one backend.
///
/// Deterministic given `seed`. Accuracy is measured as absolute error of
/// ln p. Per-backend limits come from the descriptor: roundtrip within
/// op_tolerance, addition within add_tolerance, and a product chain of
/// length L within L * op_tolerance of the logpr backend.
inline ConformanceReport pr_conformance(const PrBackend& backend, std::size_t sample_count,
                                        std::uint64_t seed) {
  if (sample_count == 0) {
    throw std::invalid_argument("pr_conformance requires sample_count >= 1");
  }
  using pr_detail::record_count;
  using pr_detail::record_error;

  ConformanceReport report;
  report.backend = std::string(backend.name);
  report.samples = sample_count;
  report.seed = seed;
  Rng rng(seed);

  const PrBackend& oracle = *find_backend("logpr");

  std::size_t constant_violations = 0;
  constant_violations += backend.to_real(backend.one) != 1.0;
  constant_violations += backend.to_real(backend.zero) != 0.0;
  constant_violations += backend.from_real(1.0) != backend.one;
  constant_violations += backend.from_real(0.0) != backend.zero;
  constant_violations += backend.cmp(backend.zero, backend.one) != std::strong_ordering::less;
  record_count(report, "constants", constant_violations);

  double roundtrip_error = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double p = log_uniform(rng, 1e-9, 1.0);
    const double back = backend.to_real(backend.from_real(p));
    roundtrip_error = std::max(roundtrip_error, std::fabs(std::log(back) - std::log(p)));
  }
  record_error(report, "roundtrip_ln_error", roundtrip_error, backend.op_tolerance);

  const std::size_t chain_length = std::min<std::size_t>(sample_count, 1000);
  PrValue product = backend.one;
  PrValue oracle_product = oracle.one;
  for (std::size_t i = 0; i < chain_length; ++i) {
    const double p = uniform_between(rng, 0.5, 1.0);
    product = backend.mul(product, backend.from_real(p));
    oracle_product = oracle.mul(oracle_product, oracle.from_real(p));
  }
  record_error(report, "mul_chain_ln_error",
               std::fabs(backend.to_log(product) - oracle.to_log(oracle_product)),
               static_cast<double>(chain_length) * backend.op_tolerance);

  double add_error = 0.0;
  std::size_t mul_commute = 0;
  std::size_t add_commute = 0;
  std::size_t add_monotone = 0;
  std::size_t identities = 0;
  std::size_t ordering = 0;
  const double separation = 10.0 * backend.op_tolerance;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double p = log_uniform(rng, 1e-9, 0.5);
    const double q = log_uniform(rng, 1e-9, 0.5);
    const double r = log_uniform(rng, 1e-9, 0.5);
    const PrValue a = backend.from_real(p);
    const PrValue b = backend.from_real(q);
    const PrValue c = backend.from_real(r);

    const double expected = std::log(p + q);
    add_error = std::max(add_error, std::fabs(backend.to_log(backend.add(a, b)) - expected));

    mul_commute += backend.mul(a, b) != backend.mul(b, a);
    add_commute += backend.add(a, b) != backend.add(b, a);

    // a_low <= a_high in probability, so adding c must preserve the order.
    const auto [low, high] = backend.cmp(a, b) == std::strong_ordering::greater
                                 ? std::pair{b, a}
                                 : std::pair{a, b};
    add_monotone += backend.cmp(backend.add(low, c), backend.add(high, c)) ==
                    std::strong_ordering::greater;

    identities += backend.mul(a, backend.one) != a;
    identities += backend.mul(a, backend.zero) != backend.zero;
    identities += backend.add(a, backend.zero) != a;
    identities += backend.add(backend.zero, a) != a;

    if (std::fabs(std::log(p) - std::log(q)) > separation) {
      const auto expected_order = p < q ? std::strong_ordering::less : std::strong_ordering::greater;
      ordering += backend.cmp(a, b) != expected_order;
    }
  }
  record_error(report, "add_ln_error", add_error, backend.add_tolerance);
  record_count(report, "mul_commutative", mul_commute);
  record_count(report, "add_commutative", add_commute);
  record_count(report, "add_monotone", add_monotone);
  record_count(report, "identity_absorption", identities);
  record_count(report, "cmp_consistent", ordering);
  return report;
}

}  // namespace pa
