// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "argmax.hpp"
#include "oracles.hpp"
#include "pa/accounting.hpp"
#include "pa/balanced.hpp"
#include "pa/bench.hpp"
#include "pa/compact_table.hpp"
#include "pa/fixed_log.hpp"
#include "pa/hashing.hpp"
#include "pa/log_pr.hpp"
#include "pa/pr.hpp"
#include "pa/sampling.hpp"
#include "pa/trie.hpp"
#include "pa/unigram.hpp"
#include "pa/vector.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Container workloads shared by the leak and oracle criteria.

std::size_t compact_table_mismatches(std::uint64_t seed) {
  pa::Rng rng(seed);
  pa::CompactTable<std::uint16_t, std::uint32_t> table;
  std::map<std::uint16_t, std::uint32_t> oracle;
  std::size_t mismatches = 0;
  for (int step = 0; step < 10'000; ++step) {
    const auto key = static_cast<std::uint16_t>(rng() % 64);
    switch (rng() % 3) {
      case 0: {
        const auto datum = static_cast<std::uint32_t>(rng());
        mismatches += table.insert(key, datum) != oracle.contains(key);
        oracle[key] = datum;
        break;
      }
      case 1:
        mismatches += table.erase(key) != (oracle.erase(key) == 1);
        break;
      default: {
        const auto it = oracle.find(key);
        const auto expected =
            it == oracle.end() ? std::nullopt : std::optional<std::uint32_t>(it->second);
        mismatches += table.lookup(key) != expected;
      }
    }
    mismatches += table.size() != oracle.size();
    for (std::size_t i = 1; i < table.size(); ++i) {
      mismatches += !(table.nth(i - 1).first < table.nth(i).first);
    }
  }
  std::size_t rank = 0;
  for (const auto& [key, datum] : oracle) {
    mismatches += table.nth(rank).first != key || table.nth(rank).second != datum;
    ++rank;
  }
  return mismatches;
}

template <class Table, class Key, class MakeKey>
std::size_t hash_mismatches(std::uint64_t seed, MakeKey make_key) {
  pa::Rng rng(seed);
  Table table;
  std::unordered_map<Key, int> oracle;
  std::size_t mismatches = 0;
  for (int step = 0; step < 100'000; ++step) {
    const Key key = make_key(rng);
    switch (rng() % 3) {
      case 0: {
        const int datum = static_cast<int>(rng() % 1000);
        mismatches += table.insert(key, datum) != oracle.contains(key);
        oracle[key] = datum;
        break;
      }
      case 1:
        mismatches += table.remove(key) != (oracle.erase(key) == 1);
        break;
      default: {
        const auto it = oracle.find(key);
        const auto expected = it == oracle.end() ? std::nullopt : std::optional<int>(it->second);
        mismatches += table.lookup(key) != expected;
      }
    }
    mismatches += table.size() != oracle.size();
    mismatches += table.load() > Table::kMaxLoad;
  }
  std::unordered_map<Key, int> yielded;
  for (const auto& [key, datum] : table) {
    mismatches += !yielded.emplace(key, datum).second;
  }
  mismatches += yielded != oracle;
  return mismatches;
}

std::size_t unigram_mismatches(std::uint64_t seed, bool& saw_two, bool& saw_four) {
  constexpr std::size_t kAlphabet = 512;
  pa::Rng rng(seed);
  pa::UnigramTable table(kAlphabet);
  std::vector<std::uint64_t> oracle(kAlphabet, 0);
  std::size_t mismatches = 0;
  saw_two = false;
  saw_four = false;
  for (int i = 0; i < 100'000; ++i) {
    // Symbol 0 climbs past 2^8 early and past 2^16 before the end.
    const std::size_t symbol = i % 2 == 0 ? 0 : static_cast<std::size_t>(rng() % kAlphabet);
    const std::uint64_t by = symbol == 0 ? 2 : 1;
    const std::size_t before = table.counter_width();
    table.increment(symbol, by);
    oracle[symbol] += by;
    if (before == 1 && table.counter_width() == 2) {
      saw_two = oracle[0] == 256;
    }
    if (before == 2 && table.counter_width() == 4) {
      saw_four = oracle[0] == 65536;
    }
    mismatches += table.count(symbol) != oracle[symbol];
  }
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < kAlphabet; ++s) {
    mismatches += table.count(s) != oracle[s];
    total += oracle[s];
  }
  mismatches += table.total() != total;
  return mismatches;
}

std::size_t trie_mismatches(std::uint64_t seed) {
  pa::Rng rng(seed);
  pa::Trie<std::uint16_t> trie;
  std::map<std::vector<std::uint16_t>, std::uint64_t> oracle;
  std::vector<std::vector<std::uint16_t>> order;
  std::size_t mismatches = 0;
  for (int i = 0; i < 10'000; ++i) {
    std::vector<std::uint16_t> text(rng() % 7);
    for (auto& symbol : text) {
      symbol = static_cast<std::uint16_t>(rng() % 5);
    }
    const auto [it, fresh] = oracle.emplace(text, oracle.size());
    if (fresh) {
      order.push_back(text);
    }
    mismatches += trie.index_of(text) != it->second;
  }
  mismatches += trie.size() != oracle.size();
  for (std::uint64_t i = 0; i < trie.size(); ++i) {
    const auto text = trie.string_of(i);
    mismatches += text != order[i];
    mismatches += trie.find(text) != std::optional<std::uint64_t>(i);
  }
  // Proper prefixes that were never inserted must stay unassigned.
  for (const auto& text : order) {
    for (std::size_t cut = 0; cut < text.size(); ++cut) {
      std::vector<std::uint16_t> prefix(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(cut));
      if (!oracle.contains(prefix)) {
        mismatches += trie.find(prefix).has_value();
      }
    }
  }
  return mismatches;
}

auto symbol_key = [](pa::Rng& rng) { return static_cast<std::uint32_t>(rng() % 256); };
auto string_key = [](pa::Rng& rng) {
  std::string key(rng() % 3, '\0');
  for (auto& c : key) {
    c = static_cast<char>(rng() % 7);
  }
  return key;
};

// ---------------------------------------------------------------------------

Outcome leak_accounting() {
  Outcome out;
  const auto start = Clock::now();
  out.require(pa::acct_totals() == pa::Totals{0, 0}, "registry not empty at start");
  {
    pa::Vector<std::uint64_t> vector;
    for (std::uint64_t i = 0; i < 10'000; ++i) {
      vector.push_back(i);
    }
    auto copy = pa::concat(vector, vector);
    copy.sort();
    out.require(pa::acct_totals().blocks == 2, "vector blocks");
  }
  bool two = false;
  bool four = false;
  compact_table_mismatches(1);
  hash_mismatches<pa::SymbolHash<std::uint32_t, int>, std::uint32_t>(2, symbol_key);
  hash_mismatches<pa::StringHash<int>, std::string>(3, string_key);
  unigram_mismatches(4, two, four);
  trie_mismatches(5);
  {
    pa::WireWriter sink;
    pa::Trie<std::uint8_t> trie;
    trie.index_of({1, 2, 3});
    trie.write(sink);
    pa::WireReader in(sink.bytes());
    auto loaded = pa::Trie<std::uint8_t>::read(in);
    pa::Trie<std::uint8_t> assigned;
    assigned = loaded;
    auto moved = std::move(loaded);
  }
  const pa::Totals totals = pa::acct_totals();
  const double elapsed = seconds_since(start);
  out.require(totals == pa::Totals{0, 0}, "live allocations remain");
  out.require(elapsed < 60.0, "runtime over 1 min");
  out.detail << "totals=(" << totals.blocks << "," << totals.bytes << ") after every module"
             << " time=" << elapsed << "s";
  return out;
}

Outcome container_oracles() {
  Outcome out;
  const auto start = Clock::now();
  const std::size_t ct = compact_table_mismatches(11);
  const std::size_t hs =
      hash_mismatches<pa::SymbolHash<std::uint32_t, int>, std::uint32_t>(12, symbol_key);
  const std::size_t hb = hash_mismatches<pa::StringHash<int>, std::string>(13, string_key);
  bool two = false;
  bool four = false;
  const std::size_t un = unigram_mismatches(14, two, four);
  const std::size_t tr = trie_mismatches(15);
  const double elapsed = seconds_since(start);
  out.require(ct == 0, "compact_table");
  out.require(hs == 0, "symbol hash");
  out.require(hb == 0, "string hash");
  out.require(un == 0, "unigram");
  out.require(two && four, "unigram widening at 2^8 and 2^16 not exercised");
  out.require(tr == 0, "trie");
  out.require(elapsed < 120.0, "runtime over 2 min");
  out.detail << "mismatches compact_table=" << ct << " symbol_hash=" << hs << " string_hash=" << hb
             << " unigram=" << un << " trie=" << tr << " widened@2^8=" << two
             << " widened@2^16=" << four << " time=" << elapsed << "s";
  return out;
}

// Builds one of each serializable object from `seed` and encodes them all.
pa::Bytes encode_everything(std::uint64_t seed, bool& roundtrip_ok) {
  pa::Rng rng(seed);
  pa::WireWriter out;
  roundtrip_ok = true;

  pa::Vector<std::uint32_t> vector;
  for (int i = 0; i < 1000; ++i) {
    vector.push_back(static_cast<std::uint32_t>(rng()));
  }
  pa::CompactTable<std::uint32_t, std::uint64_t> table;
  for (int i = 0; i < 1000; ++i) {
    table.insert(static_cast<std::uint32_t>(rng() % 5000), rng());
  }
  pa::UnigramTable unigram(100);
  for (int i = 0; i < 20'000; ++i) {
    unigram.increment(static_cast<std::size_t>(rng() % 100), 1 + rng() % 8);
  }
  pa::Trie<std::uint32_t> trie;
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::uint32_t> text(rng() % 6);
    for (auto& symbol : text) {
      symbol = static_cast<std::uint32_t>(rng() % 1000);
    }
    trie.index_of(text);
  }
  std::vector<pa::Balanced> balanced{pa::Balanced(), pa::Balanced::normalize(-0.5, -9965)};
  std::vector<pa::FixedLog32> fixed{pa::FixedLog32::zero(), pa::FixedLog32::one()};
  std::vector<pa::LogPr> logpr{pa::LogPr::zero(), pa::LogPr::one()};
  for (int i = 0; i < 200; ++i) {
    const double p = pa::log_uniform(rng, 1e-300, 1.0);
    balanced.push_back(pa::Balanced::from_real((rng() & 1 ? -1.0 : 1.0) * p));
    fixed.push_back(pa::FixedLog32::from_real(p));
    logpr.push_back(pa::LogPr::from_real(p));
  }

  vector.write(out);
  table.write(out);
  unigram.write(out);
  trie.write(out);
  for (const auto& v : balanced) v.write(out);
  for (const auto& v : fixed) v.write(out);
  for (const auto& v : logpr) v.write(out);

  pa::WireReader in(out.bytes());
  roundtrip_ok &= pa::Vector<std::uint32_t>::read(in) == vector;
  roundtrip_ok &= decltype(table)::read(in) == table;
  roundtrip_ok &= pa::UnigramTable::read(in) == unigram;
  roundtrip_ok &= pa::Trie<std::uint32_t>::read(in) == trie;
  for (const auto& v : balanced) roundtrip_ok &= pa::Balanced::read(in) == v;
  for (const auto& v : fixed) roundtrip_ok &= pa::FixedLog32::read(in) == v;
  for (const auto& v : logpr) roundtrip_ok &= pa::LogPr::read(in) == v;
  roundtrip_ok &= in.at_end();
  return out.take();
}

Outcome serialization() {
  Outcome out;
  bool first_ok = false;
  bool second_ok = false;
  const pa::Bytes first = encode_everything(21, first_ok);
  const pa::Bytes second = encode_everything(21, second_ok);
  out.require(first_ok && second_ok, "roundtrip identity");
  out.require(first == second, "byte streams differ between runs");
  out.detail << "vector, compact_table, unigram, trie, balanced, fixedlog, logpr roundtrip="
             << (first_ok && second_ok ? "identical" : "DIFFERENT") << " bytes=" << first.size()
             << " repeat_identical=" << (first == second);
  return out;
}

Outcome numeric_accuracy() {
  Outcome out;
  constexpr double kScale = 65536.0;
  pa::Rng rng(31);

  double fl_roundtrip = 0.0;
  double fl_add = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double p = pa::log_uniform(rng, 1e-9, 1.0);
    fl_roundtrip = std::max(fl_roundtrip,
                            std::fabs(std::log(pa::FixedLog32::from_real(p).to_real()) - std::log(p)));
    const double a = pa::log_uniform(rng, 1e-9, 0.5);
    const double b = pa::log_uniform(rng, 1e-9, 0.5);
    const long double expected = pa::testing::log_sum_exp(std::log(static_cast<long double>(a)),
                                                          std::log(static_cast<long double>(b)));
    const double sum = (pa::FixedLog32::from_real(a) + pa::FixedLog32::from_real(b)).log_value();
    fl_add = std::max(fl_add, static_cast<double>(std::fabs(sum - expected)));
  }
  // The 1e-12 slack covers double evaluation of exp and log on the measured side.
  out.require(fl_roundtrip <= 0.5 / kScale + 1e-12, "fixedlog roundtrip");
  out.require(fl_add <= 2.0 / kScale, "fixedlog add");

  double bal_single = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const auto draw = [&] {
      const double m = pa::uniform_between(rng, 0.5, 1.0);
      const int e = static_cast<int>(rng() % 401) - 200;
      return pa::Balanced::from_real((rng() & 1 ? -1.0 : 1.0) * std::ldexp(m, e));
    };
    const pa::Balanced a = draw();
    const pa::Balanced b = draw();
    const double x = a.to_real();
    const double y = b.to_real();
    const pa::Balanced got[] = {a * b, a / b, a + b, a - b};
    const double want[] = {x * y, x / y, x + y, x - y};
    for (int k = 0; k < 4; ++k) {
      const double err = want[k] == 0.0 ? std::fabs(got[k].to_real())
                                        : std::fabs(got[k].to_real() - want[k]) / std::fabs(want[k]);
      bal_single = std::max(bal_single, err);
    }
  }
  out.require(bal_single <= 0x1.0p-22, "balanced single op");

  pa::Balanced bal_product = pa::Balanced::from_real(1.0);
  pa::LogPr lp_product = pa::LogPr::one();
  for (int i = 0; i < 1000; ++i) {
    const double p = pa::log_uniform(rng, 1e-10, 1.0);
    bal_product *= pa::Balanced::from_real(p);
    lp_product *= pa::LogPr::from_real(p);
  }
  const double bal_chain = std::fabs(bal_product.log_magnitude() - lp_product.log_value());
  out.require(bal_chain <= 1000 * 0x1.0p-22, "balanced 10^3 chain");

  // Product of 1000 probabilities near 10^-1500.
  std::vector<double> factors;
  for (int i = 0; i < 1000; ++i) {
    factors.push_back(pa::log_uniform(rng, 1e-3, 1.0));
  }
  const long double oracle = pa::testing::log_product(factors);
  double dbl = 1.0;
  pa::Balanced bal = pa::Balanced::from_real(1.0);
  pa::FixedLog32 fl = pa::FixedLog32::one();
  pa::LogPr lp = pa::LogPr::one();
  for (double f : factors) {
    dbl *= f;
    bal *= pa::Balanced::from_real(f);
    fl *= pa::FixedLog32::from_real(f);
    lp *= pa::LogPr::from_real(f);
  }
  const double bal_err = static_cast<double>(std::fabs(bal.log_magnitude() - oracle));
  const double fl_err = static_cast<double>(std::fabs(fl.log_value() - oracle));
  const double lp_err = static_cast<double>(std::fabs(lp.log_value() - oracle));
  const bool extreme_ok = dbl == 0.0 && !bal.is_zero() && !fl.is_zero() && !lp.is_zero() &&
                          bal_err <= 1000 * 0x1.0p-22 && fl_err <= 1000 * 0.5 / kScale &&
                          lp_err <= 1e-9;
  out.require(extreme_ok, "extreme range");

  out.detail.precision(3);
  out.detail << "fixedlog roundtrip=" << fl_roundtrip << " (<=" << 0.5 / kScale << ")"
             << " fixedlog add=" << fl_add << " (<=" << 2.0 / kScale << ")"
             << " balanced op=" << bal_single << " (<=" << 0x1.0p-22 << ")"
             << " balanced chain=" << bal_chain << " (<=" << 1000 * 0x1.0p-22 << ")"
             << " extreme log10=" << static_cast<double>(oracle / std::log(10.0L))
             << " double=" << dbl << " ln-err balanced=" << bal_err << " fixedlog=" << fl_err
             << " logpr=" << lp_err;
  return out;
}

Outcome interface_laws() {
  Outcome out;
  for (const auto& backend : pa::pr_backends()) {
    const auto report = pa::pr_conformance(backend, 10'000, 41);
    out.require(report.passed(), std::string(backend.name) + " conformance");
    out.detail << backend.name << "=" << (report.passed() ? "ok" : "FAIL") << " ";
    if (!report.passed()) {
      std::cerr << report.to_text();
    }
  }
  const auto argmax = pa::testing::argmax_invariance(43, 10 * 0.5 / 65536.0);
  out.require(argmax.mismatches == 0, "argmax invariance");
  out.require(argmax.compared > 0, "argmax compared no vectors");
  out.detail << "argmax vectors=" << argmax.vectors << " compared=" << argmax.compared
             << " mismatches=" << argmax.mismatches;
  return out;
}

Outcome benchmark(std::vector<pa::BenchResult>& table, pa::BenchConfig& config) {
  Outcome out;
  const auto start = Clock::now();
  config.op_count = 10'000'000;
  config.seed = 1;
  config.backends = {"double", "logpr", "balanced", "fixedlog"};
  if (const char* reps = std::getenv("PA_BENCH_REPS")) {
    config.repetitions = std::max(1, std::atoi(reps));
  }
  table = pa::run_bench(config);
  out.require(table.size() == 4, "four rows");
  bool stable = true;
  for (const auto& row : table) {
    const auto again = pa::bench_workload(*pa::find_backend(row.backend), config.op_count,
                                          config.seed, 1);
    stable &= again.checksum == row.checksum && std::isfinite(row.checksum);
  }
  const double elapsed = seconds_since(start);
  out.require(stable, "checksums changed between runs");
  out.require(!table.empty() && table.front().ratio == 1.0, "double ratio");
  out.require(elapsed < 120.0, "runtime over 2 min");
  const auto ordering = pa::fixedlog_faster_than_logpr(table);
  out.detail << "ops=1e7 checksums stable=" << stable << " ratios";
  for (const auto& row : table) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.2f", row.ratio);
    out.detail << " " << row.backend << "=" << ratio;
  }
  out.detail << " ordering fixedlog<logpr=" << (ordering && *ordering ? "yes" : "no")
             << " (informational) time=" << elapsed << "s";
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&failures](const char* name, const Outcome& outcome) {
    std::cout << (outcome.passed ? "PASS" : "FAIL") << "  " << name << ": "
              << outcome.detail.str() << std::endl;
    failures += outcome.passed ? 0 : 1;
  };

  report("leak accounting", leak_accounting());
  report("container oracle equivalence", container_oracles());
  report("serialization", serialization());
  report("numeric accuracy", numeric_accuracy());
  report("generic-interface laws", interface_laws());

  std::vector<pa::BenchResult> table;
  pa::BenchConfig config;
  const Outcome bench = benchmark(table, config);
  std::cout << pa::format_bench(table, config);
  report("benchmark", bench);

  std::cout << (failures == 0 ? "all acceptance criteria passed" : "acceptance FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
