#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "pa/pr.hpp"
#include "pa/sampling.hpp"

// Cross-backend arithmetic benchmark.
//
// The workload is a single dependency chain: acc = acc * x_k, then
// acc = acc + y_k, for op_count / 2 pseudo-random pairs. Factors lie in
// [0.25, 0.75) and addends in [2^-40, 2^-4), so acc stays below 1 and no
// backend ever clamps. Every 64 operations an accumulator that has fallen
// under 2^-32 is divided by 2^-32 to pull it back toward 1. The checksum is
// ln(acc), which depends only on (backend, op_count, seed).
namespace pa {

enum class BenchFormat { kText, kCsv };

struct BenchConfig {
  std::uint64_t op_count = 10'000'000;
  std::uint64_t seed = 1;
  std::vector<std::string> backends;  // empty means all four
  BenchFormat format = BenchFormat::kText;
  int repetitions = 3;
};

struct WorkloadResult {
  double checksum = 0.0;
  double seconds = 0.0;
};

struct BenchResult {
  std::string backend;
  double seconds = 0.0;
  double ratio = 0.0;
  double checksum = 0.0;
};

namespace bench_detail {

inline constexpr std::size_t kChunkPairs = 8192;
inline constexpr double kBandFloor = 0x1.0p-32;

template <class T>
double run_chain_once(std::uint64_t op_count, std::uint64_t seed, double& checksum) {
  using Traits = PrTraits<T>;
  using Clock = std::chrono::steady_clock;

  Rng rng(seed);
  const std::uint64_t pairs = op_count / 2;
  const T band = Traits::from_real(kBandFloor);
  std::vector<T> factors(kChunkPairs);
  std::vector<T> addends(kChunkPairs);

  // First use builds any lazily constructed tables outside the timed region.
  static_cast<void>(Traits::add(band, band));

  T acc = Traits::one();
  Clock::duration elapsed{};
  std::uint64_t done = 0;
  while (done < pairs) {
    const auto chunk = static_cast<std::size_t>(std::min<std::uint64_t>(kChunkPairs, pairs - done));
    for (std::size_t i = 0; i < chunk; ++i) {
      factors[i] = Traits::from_real(uniform_between(rng, 0.25, 0.75));
      addends[i] = Traits::from_real(log_uniform(rng, 0x1.0p-40, 0x1.0p-4));
    }
    const auto start = Clock::now();
    for (std::size_t i = 0; i < chunk; ++i) {
      acc = Traits::mul(acc, factors[i]);
      acc = Traits::add(acc, addends[i]);
      // 32 pairs = 64 operations.
      if (((done + i + 1) & 31U) == 0 && Traits::cmp(acc, band) == std::strong_ordering::less) {
        acc = Traits::div(acc, band);
      }
    }
    elapsed += Clock::now() - start;
    done += chunk;
  }
  checksum = Traits::to_log(acc);
  return std::chrono::duration<double>(elapsed).count();
}

}  // namespace bench_detail

/// Minimum time over `repetitions` runs of the chain for backend type T.
template <class T>
WorkloadResult bench_workload_typed(std::uint64_t op_count, std::uint64_t seed, int repetitions = 1) {
  WorkloadResult result;
  result.seconds = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < std::max(repetitions, 1); ++rep) {
    double checksum = 0.0;
    const double seconds = bench_detail::run_chain_once<T>(op_count, seed, checksum);
    result.seconds = std::min(result.seconds, seconds);
    result.checksum = checksum;
  }
  return result;
}

inline WorkloadResult bench_workload(const PrBackend& backend, std::uint64_t op_count,
                                     std::uint64_t seed, int repetitions = 1) {
  WorkloadResult result;
  const bool known = visit_backend_type(backend.name, [&](auto tag) {
    using T = typename decltype(tag)::type;
    result = bench_workload_typed<T>(op_count, seed, repetitions);
  });
  if (!known) {
    throw std::invalid_argument("unknown backend '" + std::string(backend.name) + "'");
  }
  return result;
}

/// Parses a comma-separated backend list; throws std::invalid_argument on an
/// unknown or repeated name.
inline std::vector<std::string> parse_backend_list(std::string_view list) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string name(list.substr(start, comma - start));
    if (find_backend(name) == nullptr) {
      throw std::invalid_argument("unknown backend '" + name + "'");
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw std::invalid_argument("backend '" + name + "' listed twice");
    }
    names.push_back(std::move(name));
    start = comma + 1;
  }
  return names;
}

/// One row per requested backend in canonical order (double first). The
/// double backend is always timed because every ratio is relative to it.
inline std::vector<BenchResult> run_bench(const BenchConfig& config) {
  if (config.op_count < 1) {
    throw std::invalid_argument("op_count must be at least 1");
  }
  for (const auto& name : config.backends) {
    if (find_backend(name) == nullptr) {
      throw std::invalid_argument("unknown backend '" + name + "'");
    }
  }
  const auto wanted = [&](std::string_view name) {
    return config.backends.empty() ||
           std::find(config.backends.begin(), config.backends.end(), name) != config.backends.end();
  };

  const WorkloadResult baseline =
      bench_workload(*find_backend("double"), config.op_count, config.seed, config.repetitions);
  std::vector<BenchResult> results;
  for (const auto& backend : pr_backends()) {
    if (!wanted(backend.name)) {
      continue;
    }
    const WorkloadResult measured =
        backend.name == "double"
            ? baseline
            : bench_workload(backend, config.op_count, config.seed, config.repetitions);
    BenchResult row;
    row.backend = std::string(backend.name);
    row.seconds = measured.seconds;
    row.checksum = measured.checksum;
    row.ratio = backend.name == "double" ? 1.0
                                         : (baseline.seconds > 0.0 ? measured.seconds / baseline.seconds
                                                                   : std::numeric_limits<double>::infinity());
    results.push_back(std::move(row));
  }
  return results;
}

/// ratio(fixedlog) < ratio(logpr), when both rows are present.
inline std::optional<bool> fixedlog_faster_than_logpr(const std::vector<BenchResult>& results) {
  std::optional<double> fixedlog;
  std::optional<double> logpr;
  for (const auto& row : results) {
    if (row.backend == "fixedlog") fixedlog = row.ratio;
    if (row.backend == "logpr") logpr = row.ratio;
  }
  if (!fixedlog || !logpr) {
    return std::nullopt;
  }
  return *fixedlog < *logpr;
}

inline std::string format_bench(const std::vector<BenchResult>& results, const BenchConfig& config) {
  std::ostringstream out;
  char line[160];
  if (config.format == BenchFormat::kCsv) {
    out << "backend,seconds,ratio,checksum\n";
    for (const auto& row : results) {
      std::snprintf(line, sizeof line, "%s,%.6f,%.4f,%.17g\n", row.backend.c_str(), row.seconds,
                    row.ratio, row.checksum);
      out << line;
    }
    return out.str();
  }
  out << "pa-bench: ops=" << config.op_count << " seed=" << config.seed
      << " repetitions=" << config.repetitions << " (minimum wall time)\n";
  std::snprintf(line, sizeof line, "%-10s %12s %10s %24s\n", "backend", "seconds", "ratio", "checksum");
  out << line;
  for (const auto& row : results) {
    std::snprintf(line, sizeof line, "%-10s %12.6f %9.2fx %24.17g\n", row.backend.c_str(), row.seconds,
                  row.ratio, row.checksum);
    out << line;
  }
  if (const auto ordering = fixedlog_faster_than_logpr(results)) {
    out << "ordering ratio(fixedlog) < ratio(logpr): " << (*ordering ? "yes" : "no")
        << " (informational)\n";
  }
  return out.str();
}

}  // namespace pa
