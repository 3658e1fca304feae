#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "pa/accounting.hpp"
#include "pa/error.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Sorted association table in one contiguous pair array.
///
/// Lookup is a binary search. Insert and delete shift the tail, so they are
/// O(n). Storage is kept exact-fit: capacity always equals the entry count,
/// which means the footprint is `size * sizeof(Entry) + header` and the
/// under-quarter shrink rule never has slack to reclaim. Inserting an
/// existing key replaces its datum.
template <class Key, class Datum, class Compare = std::less<Key>>
class CompactTable {
 public:
  using Entry = std::pair<Key, Datum>;
  using const_iterator = typename std::vector<Entry>::const_iterator;

  explicit CompactTable(Compare compare = Compare{})
      : compare_(std::move(compare)), token_(acct_register(footprint_for(0))) {}

  CompactTable(const CompactTable& other)
      : entries_(exact_copy(other.entries_)),
        compare_(other.compare_),
        token_(acct_register(footprint_for(entries_.size()))) {}

  CompactTable& operator=(const CompactTable& other) {
    if (this != &other) {
      entries_ = exact_copy(other.entries_);
      compare_ = other.compare_;
      sync();
    }
    return *this;
  }

  CompactTable(CompactTable&& other) noexcept
      : entries_(std::move(other.entries_)),
        compare_(std::move(other.compare_)),
        token_(std::move(other.token_)) {}

  CompactTable& operator=(CompactTable&& other) noexcept {
    if (this != &other) {
      entries_ = std::move(other.entries_);
      compare_ = std::move(other.compare_);
      token_ = std::move(other.token_);
    }
    return *this;
  }

  ~CompactTable() = default;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  const Datum* find(const Key& key) const {
    auto it = lower(key);
    if (it != entries_.end() && !compare_(key, it->first)) {
      return &it->second;
    }
    return nullptr;
  }

  std::optional<Datum> lookup(const Key& key) const {
    if (const Datum* datum = find(key)) {
      return *datum;
    }
    return std::nullopt;
  }

  bool contains(const Key& key) const { return find(key) != nullptr; }

  /// Returns true when an existing datum was replaced.
  bool insert(const Key& key, const Datum& datum) {
    auto it = lower(key);
    if (it != entries_.end() && !compare_(key, it->first)) {
      entries_[static_cast<std::size_t>(it - entries_.begin())].second = datum;
      return true;
    }
    const auto position = static_cast<std::size_t>(it - entries_.begin());
    std::vector<Entry> next;
    next.reserve(entries_.size() + 1);
    next.insert(next.end(), entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(position));
    next.emplace_back(key, datum);
    next.insert(next.end(), entries_.begin() + static_cast<std::ptrdiff_t>(position), entries_.end());
    entries_ = std::move(next);
    sync();
    return false;
  }

  bool erase(const Key& key) {
    auto it = lower(key);
    if (it == entries_.end() || compare_(key, it->first)) {
      return false;
    }
    const auto position = it - entries_.begin();
    std::vector<Entry> next;
    next.reserve(entries_.size() - 1);
    next.insert(next.end(), entries_.cbegin(), entries_.cbegin() + position);
    next.insert(next.end(), entries_.cbegin() + position + 1, entries_.cend());
    entries_ = std::move(next);
    sync();
    return true;
  }

  /// The rank-th smallest entry.
  const Entry& nth(std::size_t rank) const {
    if (rank >= size()) {
      throw std::out_of_range("CompactTable::nth rank " + std::to_string(rank) + " >= size " +
                              std::to_string(size()));
    }
    return entries_[rank];
  }

  std::uint64_t footprint() const noexcept { return token_.logical_size(); }
  static constexpr std::size_t entry_size = sizeof(Entry);

  void write(WireWriter& out) const
    requires std::is_trivially_copyable_v<Key> && std::is_trivially_copyable_v<Datum>
  {
    out.write_u64(size());
    for (const auto& [key, datum] : entries_) {
      out.write_object(key);
      out.write_object(datum);
    }
  }

  static CompactTable read(WireReader& in, Compare compare = Compare{})
    requires std::is_trivially_copyable_v<Key> && std::is_trivially_copyable_v<Datum>
  {
    const std::uint64_t count = in.read_u64();
    in.require_items(count, sizeof(Key) + sizeof(Datum));
    CompactTable table(std::move(compare));
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
      Key key = in.read_object<Key>();
      Datum datum = in.read_object<Datum>();
      if (!entries.empty() && !table.compare_(entries.back().first, key)) {
        throw decode_error("CompactTable keys are not strictly increasing at entry " +
                           std::to_string(i));
      }
      entries.emplace_back(std::move(key), std::move(datum));
    }
    table.entries_ = std::move(entries);
    table.sync();
    return table;
  }

  friend bool operator==(const CompactTable& a, const CompactTable& b) {
    return a.entries_ == b.entries_;
  }

 private:
  static constexpr std::uint64_t footprint_for(std::size_t capacity) {
    return capacity * sizeof(Entry) + sizeof(CompactTable);
  }

  static std::vector<Entry> exact_copy(const std::vector<Entry>& source) {
    std::vector<Entry> copy;
    copy.reserve(source.size());
    copy.assign(source.begin(), source.end());
    return copy;
  }

  const_iterator lower(const Key& key) const {
    return std::lower_bound(entries_.begin(), entries_.end(), key,
                            [this](const Entry& entry, const Key& probe) {
                              return compare_(entry.first, probe);
                            });
  }

  void sync() {
    if (token_.is_live()) {
      token_.resize(footprint_for(entries_.capacity()));
    } else {
      token_ = acct_register(footprint_for(entries_.capacity()));
    }
  }

  std::vector<Entry> entries_;
  Compare compare_;
  AllocationToken token_;
};

}  // namespace pa
