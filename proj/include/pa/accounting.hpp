#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <utility>

/// Process-wide accounting of live library allocations.
///
/// Every container registers an AllocationToken sized to its logical
/// footprint and releases it when destroyed. A test suite that has destroyed
/// all of its objects can then assert `pa::acct_totals() == Totals{0, 0}`.
namespace pa {

struct Totals {
  std::uint64_t blocks = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const Totals&, const Totals&) = default;
};

namespace detail {

class Registry {
 public:
  static Registry& global() {
    static Registry registry;
    return registry;
  }

  void add(std::uint64_t blocks, std::uint64_t bytes) {
    std::lock_guard<std::mutex> lock(mutex_);
    totals_.blocks += blocks;
    totals_.bytes += bytes;
  }

  void adjust(std::uint64_t old_bytes, std::uint64_t new_bytes) {
    std::lock_guard<std::mutex> lock(mutex_);
    totals_.bytes = totals_.bytes - old_bytes + new_bytes;
  }

  void remove(std::uint64_t blocks, std::uint64_t bytes) {
    std::lock_guard<std::mutex> lock(mutex_);
    totals_.blocks -= blocks;
    totals_.bytes -= bytes;
  }

  Totals totals() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return totals_;
  }

  std::uint64_t next_id() { return ids_.fetch_add(1, std::memory_order_relaxed) + 1; }

 private:
  Registry() = default;

  mutable std::mutex mutex_;
  Totals totals_;
  std::atomic<std::uint64_t> ids_{0};
};

}  // namespace detail

/// Single-owner handle for one registered block.
///
/// A default-constructed token is "unknown": resizing or releasing it is a
/// programming error. Releasing twice is a programming error. A token that is
/// still live when destroyed releases itself.
class AllocationToken {
 public:
  AllocationToken() = default;

  AllocationToken(const AllocationToken&) = delete;
  AllocationToken& operator=(const AllocationToken&) = delete;

  AllocationToken(AllocationToken&& other) noexcept
      : id_(std::exchange(other.id_, 0)),
        size_(std::exchange(other.size_, 0)),
        live_(std::exchange(other.live_, false)) {}

  AllocationToken& operator=(AllocationToken&& other) noexcept {
    if (this != &other) {
      drop();
      id_ = std::exchange(other.id_, 0);
      size_ = std::exchange(other.size_, 0);
      live_ = std::exchange(other.live_, false);
    }
    return *this;
  }

  ~AllocationToken() { drop(); }

  static AllocationToken acquire(std::uint64_t logical_size) {
    AllocationToken token;
    auto& registry = detail::Registry::global();
    token.id_ = registry.next_id();
    token.size_ = logical_size;
    token.live_ = true;
    registry.add(1, logical_size);
    return token;
  }

  void resize(std::uint64_t new_size) {
    if (!live_) {
      throw std::logic_error("AllocationToken::resize on released or unknown token");
    }
    if (new_size != size_) {
      detail::Registry::global().adjust(size_, new_size);
      size_ = new_size;
    }
  }

  void release() {
    if (!live_) {
      throw std::logic_error("AllocationToken::release on released or unknown token");
    }
    detail::Registry::global().remove(1, size_);
    live_ = false;
  }

  std::uint64_t id() const noexcept { return id_; }
  std::uint64_t logical_size() const noexcept { return size_; }
  bool is_live() const noexcept { return live_; }

 private:
  void drop() noexcept {
    if (live_) {
      detail::Registry::global().remove(1, size_);
      live_ = false;
    }
  }

  std::uint64_t id_ = 0;
  std::uint64_t size_ = 0;
  bool live_ = false;
};

inline AllocationToken acct_register(std::uint64_t logical_size) {
  return AllocationToken::acquire(logical_size);
}

inline void acct_resize(AllocationToken& token, std::uint64_t new_size) { token.resize(new_size); }

inline void acct_release(AllocationToken& token) { token.release(); }

/// Both counters read under one lock, so they are mutually consistent.
inline Totals acct_totals() { return detail::Registry::global().totals(); }

}  // namespace pa
