#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pa/accounting.hpp"

// Hash-table toolkit: open addressing with double hashing over a
// power-of-two slot array.
//
// Key k probes slots (hash1(k) + i * step(k)) mod m for i = 0, 1, 2, ...
// where step(k) = hash2(k) | 1. An odd step is coprime with m = 2^j, so the
// sequence visits every slot once per m probes. Deleted slots become
// tombstones. Occupied slots (live + tombstone) never exceed 0.7 m.
namespace pa {

/// Policy describing how to hash and compare keys of type Key.
template <class Spec, class Key>
concept HashSpecFor = requires(const Spec& spec, const Key& a, const Key& b) {
  { spec.hash1(a) } -> std::convertible_to<std::uint64_t>;
  { spec.hash2(a) } -> std::convertible_to<std::uint64_t>;
  { spec.equal(a, b) } -> std::convertible_to<bool>;
};

namespace hash_detail {

constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace hash_detail

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = hash_detail::kFnvOffsetBasis;
  for (char c : bytes) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= hash_detail::kFnvPrime;
  }
  return hash;
}

/// Fixed-width unsigned symbols.
template <std::unsigned_integral Symbol>
struct SymbolHashSpec {
  static constexpr std::uint64_t hash1(Symbol symbol) {
    return hash_detail::mix64(static_cast<std::uint64_t>(symbol));
  }
  static constexpr std::uint64_t hash2(Symbol symbol) {
    return hash_detail::mix64(static_cast<std::uint64_t>(symbol) * 0x9e3779b97f4a7c15ULL +
                              0x632be59bd9b4e019ULL);
  }
  static constexpr bool equal(Symbol a, Symbol b) { return a == b; }
};

/// Length-delimited byte strings; embedded zero bytes are ordinary bytes.
struct StringHashSpec {
  static constexpr std::uint64_t hash1(std::string_view key) { return fnv1a64(key); }

  // Multiplicative polynomial hash with a different multiplier and a final
  // mix, independent of the FNV sequence.
  static constexpr std::uint64_t hash2(std::string_view key) {
    std::uint64_t hash = key.size();
    for (char c : key) {
      hash = (hash + static_cast<std::uint8_t>(c) + 1) * 0x9e3779b97f4a7c15ULL;
    }
    return hash_detail::mix64(hash);
  }

  static constexpr bool equal(std::string_view a, std::string_view b) { return a == b; }
};

template <std::unsigned_integral Symbol>
constexpr SymbolHashSpec<Symbol> make_symbol_spec() {
  return {};
}

constexpr StringHashSpec make_string_spec() { return {}; }

/// Slot index of probe number `attempt` for a key with the given hashes.
constexpr std::size_t probe_slot(std::uint64_t hash1, std::uint64_t hash2, std::uint64_t attempt,
                                 std::size_t capacity) {
  const std::uint64_t step = hash2 | 1U;
  return static_cast<std::size_t>((hash1 + attempt * step) & (capacity - 1));
}

template <class Key, class Datum, HashSpecFor<Key> Spec>
  requires std::default_initializable<Key> && std::default_initializable<Datum>
class HashCore {
 public:
  static constexpr std::size_t kInitialCapacity = 8;
  static constexpr double kMaxLoad = 0.7;

  explicit HashCore(Spec spec = Spec{}, std::size_t initial_capacity = kInitialCapacity)
      : spec_(std::move(spec)),
        slots_(round_up_capacity(initial_capacity)),
        token_(acct_register(footprint_for(slots_.size()))) {}

  HashCore(const HashCore& other)
      : spec_(other.spec_),
        slots_(other.slots_),
        live_(other.live_),
        tombstones_(other.tombstones_),
        token_(acct_register(footprint_for(slots_.size()))) {}

  HashCore& operator=(const HashCore& other) {
    if (this != &other) {
      HashCore copy(other);
      *this = std::move(copy);
    }
    return *this;
  }

  HashCore(HashCore&&) noexcept = default;
  HashCore& operator=(HashCore&&) noexcept = default;

  std::size_t size() const noexcept { return live_; }
  bool empty() const noexcept { return live_ == 0; }
  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t tombstones() const noexcept { return tombstones_; }

  double load() const noexcept {
    return static_cast<double>(live_ + tombstones_) / static_cast<double>(slots_.size());
  }

  /// Returns true when an existing datum was replaced.
  bool insert(const Key& key, Datum datum) {
    const Probe probe = locate(key);
    if (probe.found) {
      slots_[probe.slot].datum = std::move(datum);
      return true;
    }
    std::size_t slot = probe.slot;
    if (!probe.reuses_tombstone) {
      if (exceeds_load(live_ + tombstones_ + 1)) {
        grow();
        slot = locate(key).slot;
      }
    }
    place(slot, key, std::move(datum));
    return false;
  }

  const Datum* find(const Key& key) const {
    const Probe probe = locate(key);
    return probe.found ? &slots_[probe.slot].datum : nullptr;
  }

  Datum* find(const Key& key) {
    const Probe probe = locate(key);
    return probe.found ? &slots_[probe.slot].datum : nullptr;
  }

  std::optional<Datum> lookup(const Key& key) const {
    if (const Datum* datum = find(key)) {
      return *datum;
    }
    return std::nullopt;
  }

  bool contains(const Key& key) const { return find(key) != nullptr; }

  bool remove(const Key& key) {
    const Probe probe = locate(key);
    if (!probe.found) {
      return false;
    }
    Slot& slot = slots_[probe.slot];
    slot.state = SlotState::kTombstone;
    slot.key = Key{};
    slot.datum = Datum{};
    --live_;
    ++tombstones_;
    ++epoch_;
    return true;
  }

  /// Forward iteration over live entries. Any mutation of the table after
  /// the iterator was created makes the next dereference or increment throw
  /// std::logic_error.
  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::pair<const Key&, const Datum&>;
    using difference_type = std::ptrdiff_t;

    const_iterator() = default;

    value_type operator*() const {
      check();
      const Slot& slot = owner_->slots_[index_];
      return {slot.key, slot.datum};
    }

    const_iterator& operator++() {
      check();
      ++index_;
      skip();
      return *this;
    }

    const_iterator operator++(int) {
      const_iterator before = *this;
      ++*this;
      return before;
    }

    friend bool operator==(const const_iterator& a, const const_iterator& b) {
      return a.owner_ == b.owner_ && a.index_ == b.index_;
    }

   private:
    friend class HashCore;

    const_iterator(const HashCore* owner, std::size_t index)
        : owner_(owner), index_(index), epoch_(owner->epoch_) {
      skip();
    }

    void skip() {
      while (index_ < owner_->slots_.size() &&
             owner_->slots_[index_].state != SlotState::kLive) {
        ++index_;
      }
    }

    void check() const {
      if (owner_->epoch_ != epoch_) {
        throw std::logic_error("HashCore mutated during iteration");
      }
    }

    const HashCore* owner_ = nullptr;
    std::size_t index_ = 0;
    std::uint64_t epoch_ = 0;
  };

  const_iterator begin() const { return const_iterator(this, 0); }
  const_iterator end() const { return const_iterator(this, slots_.size()); }

  std::uint64_t footprint() const noexcept { return token_.logical_size(); }
  const Spec& spec() const noexcept { return spec_; }

 private:
  enum class SlotState : std::uint8_t { kEmpty, kTombstone, kLive };

  struct Slot {
    SlotState state = SlotState::kEmpty;
    Key key{};
    Datum datum{};
  };

  struct Probe {
    std::size_t slot = 0;
    bool found = false;
    bool reuses_tombstone = false;
  };

  static std::size_t round_up_capacity(std::size_t wanted) {
    std::size_t capacity = kInitialCapacity;
    while (capacity < wanted) {
      capacity *= 2;
    }
    return capacity;
  }

  static constexpr std::uint64_t footprint_for(std::size_t capacity) {
    return capacity * sizeof(Slot) + sizeof(HashCore);
  }

  bool exceeds_load(std::size_t occupied) const {
    return static_cast<double>(occupied) > kMaxLoad * static_cast<double>(slots_.size());
  }

  // Finds `key`, or else the slot an insert should use: the first tombstone
  // on the chain if there is one, otherwise the terminating empty slot.
  Probe locate(const Key& key) const {
    const std::uint64_t hash1 = spec_.hash1(key);
    const std::uint64_t hash2 = spec_.hash2(key);
    std::optional<std::size_t> first_tombstone;
    for (std::uint64_t attempt = 0; attempt < slots_.size(); ++attempt) {
      const std::size_t index = probe_slot(hash1, hash2, attempt, slots_.size());
      const Slot& slot = slots_[index];
      switch (slot.state) {
        case SlotState::kEmpty:
          if (first_tombstone) {
            return {*first_tombstone, false, true};
          }
          return {index, false, false};
        case SlotState::kTombstone:
          if (!first_tombstone) {
            first_tombstone = index;
          }
          break;
        case SlotState::kLive:
          if (spec_.equal(slot.key, key)) {
            return {index, true, false};
          }
          break;
      }
    }
    // The load bound guarantees an empty slot, so a full cycle means every
    // non-live slot on the chain was a tombstone.
    if (first_tombstone) {
      return {*first_tombstone, false, true};
    }
    throw std::logic_error("HashCore probe sequence found no free slot");
  }

  void place(std::size_t index, const Key& key, Datum datum) {
    Slot& slot = slots_[index];
    if (slot.state == SlotState::kTombstone) {
      --tombstones_;
    }
    slot.state = SlotState::kLive;
    slot.key = key;
    slot.datum = std::move(datum);
    ++live_;
    ++epoch_;
  }

  // Tombstone-heavy tables are rebuilt at the same size; otherwise the
  // capacity doubles. Either way tombstones are dropped.
  void grow() {
    std::size_t capacity = slots_.size();
    if (tombstones_ <= live_ || exceeds_load(live_ + 1)) {
      capacity *= 2;
    }
    rehash(capacity);
  }

  void rehash(std::size_t capacity) {
    std::vector<Slot> old = std::exchange(slots_, std::vector<Slot>(capacity));
    live_ = 0;
    tombstones_ = 0;
    for (Slot& slot : old) {
      if (slot.state == SlotState::kLive) {
        const std::size_t index = locate(slot.key).slot;
        place(index, slot.key, std::move(slot.datum));
      }
    }
    ++epoch_;
    token_.resize(footprint_for(slots_.size()));
  }

  Spec spec_;
  std::vector<Slot> slots_;
  std::size_t live_ = 0;
  std::size_t tombstones_ = 0;
  std::uint64_t epoch_ = 0;
  AllocationToken token_;
};

template <std::unsigned_integral Symbol, class Datum>
using SymbolHash = HashCore<Symbol, Datum, SymbolHashSpec<Symbol>>;

template <class Datum>
using StringHash = HashCore<std::string, Datum, StringHashSpec>;

}  // namespace pa
