#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pa/accounting.hpp"
#include "pa/error.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Frequency table over symbols 0 .. alphabet_size-1.
///
/// All counters share one width in {1, 2, 4, 8} bytes. When an increment
/// would overflow the current width, the whole array is re-encoded at the
/// smallest width that holds the new count, so the width is always the
/// smallest one able to hold the largest counter.
class UnigramTable {
 public:
  explicit UnigramTable(std::size_t alphabet_size)
      : alphabet_size_(alphabet_size),
        counters_(alphabet_size, 0),
        token_(acct_register(footprint_for(alphabet_size, 1))) {}

  UnigramTable(const UnigramTable& other)
      : alphabet_size_(other.alphabet_size_),
        width_(other.width_),
        counters_(other.counters_),
        total_(other.total_),
        token_(acct_register(footprint_for(alphabet_size_, width_))) {}

  UnigramTable& operator=(const UnigramTable& other) {
    if (this != &other) {
      UnigramTable copy(other);
      *this = std::move(copy);
    }
    return *this;
  }

  UnigramTable(UnigramTable&&) noexcept = default;
  UnigramTable& operator=(UnigramTable&&) noexcept = default;

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t counter_width() const noexcept { return width_; }
  std::uint64_t total() const noexcept { return total_; }

  std::uint64_t count(std::size_t symbol) const {
    check_symbol(symbol);
    return load(symbol);
  }

  void increment(std::size_t symbol, std::uint64_t by = 1) {
    check_symbol(symbol);
    if (by == 0) {
      throw std::invalid_argument("UnigramTable::increment requires by >= 1");
    }
    const std::uint64_t current = load(symbol);
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    if (by > kMax - current) {
      throw std::overflow_error("UnigramTable counter for symbol " + std::to_string(symbol) +
                                " would exceed 2^64-1");
    }
    if (by > kMax - total_) {
      throw std::overflow_error("UnigramTable total would exceed 2^64-1");
    }
    const std::uint64_t next = current + by;
    if (next > max_for_width(width_)) {
      widen(width_for(next));
    }
    store(symbol, next);
    total_ += by;
  }

  std::uint64_t footprint() const noexcept { return token_.logical_size(); }

  /// alphabet_size (u64), counter_width (u8), then every counter big-endian
  /// at counter_width bytes.
  void write(WireWriter& out) const {
    out.write_u64(alphabet_size_);
    out.write_u8(static_cast<std::uint8_t>(width_));
    for (std::size_t symbol = 0; symbol < alphabet_size_; ++symbol) {
      out.write_uint(load(symbol), width_);
    }
  }

  static UnigramTable read(WireReader& in) {
    const std::uint64_t alphabet_size = in.read_u64();
    const std::size_t width = in.read_u8();
    if (!is_wire_width(width)) {
      throw decode_error("UnigramTable counter width " + std::to_string(width) +
                         " is not 1, 2, 4 or 8");
    }
    in.require_items(alphabet_size, width);
    UnigramTable table(static_cast<std::size_t>(alphabet_size));
    table.widen(width);
    std::uint64_t largest = 0;
    for (std::size_t symbol = 0; symbol < table.alphabet_size_; ++symbol) {
      const std::uint64_t value = in.read_uint(width);
      if (value > std::numeric_limits<std::uint64_t>::max() - table.total_) {
        throw decode_error("UnigramTable total overflows 64 bits");
      }
      table.store(symbol, value);
      table.total_ += value;
      largest = std::max(largest, value);
    }
    if (width_for(largest) != width) {
      throw decode_error("UnigramTable counter width " + std::to_string(width) +
                         " is wider than its largest counter needs");
    }
    return table;
  }

  friend bool operator==(const UnigramTable& a, const UnigramTable& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.width_ == b.width_ &&
           a.total_ == b.total_ && a.counters_ == b.counters_;
  }

  static constexpr std::size_t width_for(std::uint64_t value) {
    if (value <= max_for_width(1)) return 1;
    if (value <= max_for_width(2)) return 2;
    if (value <= max_for_width(4)) return 4;
    return 8;
  }

 private:
  static constexpr std::uint64_t max_for_width(std::size_t width) {
    return width >= 8 ? std::numeric_limits<std::uint64_t>::max()
                      : (std::uint64_t{1} << (8 * width)) - 1;
  }

  static constexpr std::uint64_t footprint_for(std::size_t alphabet_size, std::size_t width) {
    return alphabet_size * width + sizeof(UnigramTable);
  }

  void check_symbol(std::size_t symbol) const {
    if (symbol >= alphabet_size_) {
      throw std::out_of_range("UnigramTable symbol " + std::to_string(symbol) +
                              " >= alphabet size " + std::to_string(alphabet_size_));
    }
  }

  // Counters are stored in host byte order; only the wire format is fixed.
  std::uint64_t load(std::size_t symbol) const {
    const std::uint8_t* cell = counters_.data() + symbol * width_;
    switch (width_) {
      case 1:
        return *cell;
      case 2: {
        std::uint16_t value;
        std::memcpy(&value, cell, sizeof value);
        return value;
      }
      case 4: {
        std::uint32_t value;
        std::memcpy(&value, cell, sizeof value);
        return value;
      }
      default: {
        std::uint64_t value;
        std::memcpy(&value, cell, sizeof value);
        return value;
      }
    }
  }

  void store(std::size_t symbol, std::uint64_t value) { store_at(counters_, width_, symbol, value); }

  static void store_at(std::vector<std::uint8_t>& cells, std::size_t width, std::size_t symbol,
                       std::uint64_t value) {
    std::uint8_t* cell = cells.data() + symbol * width;
    switch (width) {
      case 1:
        *cell = static_cast<std::uint8_t>(value);
        break;
      case 2: {
        const auto narrow = static_cast<std::uint16_t>(value);
        std::memcpy(cell, &narrow, sizeof narrow);
        break;
      }
      case 4: {
        const auto narrow = static_cast<std::uint32_t>(value);
        std::memcpy(cell, &narrow, sizeof narrow);
        break;
      }
      default:
        std::memcpy(cell, &value, sizeof value);
        break;
    }
  }

  void widen(std::size_t width) {
    if (width <= width_) {
      return;
    }
    std::vector<std::uint8_t> wider(alphabet_size_ * width, 0);
    for (std::size_t symbol = 0; symbol < alphabet_size_; ++symbol) {
      store_at(wider, width, symbol, load(symbol));
    }
    counters_ = std::move(wider);
    width_ = width;
    token_.resize(footprint_for(alphabet_size_, width_));
  }

  std::size_t alphabet_size_ = 0;
  std::size_t width_ = 1;
  std::vector<std::uint8_t> counters_;
  std::uint64_t total_ = 0;
  AllocationToken token_;
};

}  // namespace pa
