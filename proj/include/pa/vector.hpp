#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "pa/accounting.hpp"
#include "pa/wire.hpp"

namespace pa {

/// Length-delimited sequence of fixed-size elements.
///
/// Elements are trivially copyable and serialize as their raw bytes, so only
/// the framing is portable; element contents are in host layout. Capacity
/// grows by doubling and the footprint `capacity * sizeof(T) + header` is
/// registered with the accounting layer while the vector is alive.
template <class T>
  requires std::is_trivially_copyable_v<T>
class Vector {
 public:
  using value_type = T;
  using iterator = typename std::vector<T>::iterator;
  using const_iterator = typename std::vector<T>::const_iterator;

  static constexpr std::size_t element_size = sizeof(T);

  Vector() : token_(acct_register(footprint_for(0))) {}

  Vector(std::initializer_list<T> values) : Vector() {
    reserve(values.size());
    elements_.assign(values.begin(), values.end());
  }

  explicit Vector(std::span<const T> values) : Vector() {
    reserve(values.size());
    elements_.assign(values.begin(), values.end());
  }

  Vector(const Vector& other) : Vector(std::span<const T>(other.elements_)) {}

  Vector& operator=(const Vector& other) {
    if (this != &other) {
      elements_ = other.elements_;
      sync();
    }
    return *this;
  }

  Vector(Vector&& other) noexcept
      : elements_(std::move(other.elements_)), token_(std::move(other.token_)) {}

  Vector& operator=(Vector&& other) noexcept {
    if (this != &other) {
      elements_ = std::move(other.elements_);
      token_ = std::move(other.token_);
    }
    return *this;
  }

  ~Vector() = default;

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  std::size_t capacity() const noexcept { return elements_.capacity(); }

  T& operator[](std::size_t i) { return elements_[i]; }
  const T& operator[](std::size_t i) const { return elements_[i]; }

  const T& at(std::size_t i) const {
    if (i >= size()) {
      throw std::out_of_range("Vector::at index " + std::to_string(i) + " >= length " +
                              std::to_string(size()));
    }
    return elements_[i];
  }

  iterator begin() noexcept { return elements_.begin(); }
  iterator end() noexcept { return elements_.end(); }
  const_iterator begin() const noexcept { return elements_.begin(); }
  const_iterator end() const noexcept { return elements_.end(); }

  std::span<T> span() noexcept { return elements_; }
  std::span<const T> span() const noexcept { return elements_; }

  void reserve(std::size_t wanted) {
    if (wanted > elements_.capacity()) {
      elements_.reserve(wanted);
      sync();
    }
  }

  void push_back(const T& value) { insert(size(), value); }

  /// Shifts elements at >= position up by one.
  void insert(std::size_t position, const T& value) {
    if (position > size()) {
      throw std::out_of_range("Vector::insert position " + std::to_string(position) +
                              " > length " + std::to_string(size()));
    }
    grow_for(size() + 1);
    elements_.insert(elements_.begin() + static_cast<std::ptrdiff_t>(position), value);
  }

  void erase(std::size_t position) {
    if (position >= size()) {
      throw std::out_of_range("Vector::erase position " + std::to_string(position) +
                              " >= length " + std::to_string(size()));
    }
    elements_.erase(elements_.begin() + static_cast<std::ptrdiff_t>(position));
  }

  void clear() noexcept { elements_.clear(); }

  /// Appends a copy of `tail`.
  void append(const Vector& tail) {
    grow_for(size() + tail.size());
    elements_.insert(elements_.end(), tail.elements_.begin(), tail.elements_.end());
  }

  /// Not stable.
  template <class Compare = std::less<T>>
  void sort(Compare compare = Compare{}) {
    std::sort(elements_.begin(), elements_.end(), compare);
  }

  void write(WireWriter& out) const {
    out.write_u64(size());
    out.write_raw(std::span(reinterpret_cast<const std::uint8_t*>(elements_.data()),
                            elements_.size() * sizeof(T)));
  }

  static Vector read(WireReader& in) {
    const std::uint64_t length = in.read_u64();
    in.require_items(length, sizeof(T));
    Vector result;
    result.reserve(static_cast<std::size_t>(length));
    auto raw = in.read_raw(static_cast<std::size_t>(length) * sizeof(T));
    result.elements_.resize(static_cast<std::size_t>(length));
    std::memcpy(result.elements_.data(), raw.data(), raw.size());
    return result;
  }

  std::uint64_t footprint() const noexcept { return token_.logical_size(); }

  friend bool operator==(const Vector& a, const Vector& b) { return a.elements_ == b.elements_; }

 private:
  static constexpr std::uint64_t footprint_for(std::size_t capacity) {
    return capacity * sizeof(T) + sizeof(Vector);
  }

  void grow_for(std::size_t wanted) {
    if (wanted <= elements_.capacity()) {
      return;
    }
    std::size_t next = std::max<std::size_t>(elements_.capacity(), 1);
    while (next < wanted) {
      next *= 2;
    }
    reserve(next);
  }

  // A moved-from vector re-registers on first use.
  void sync() {
    if (token_.is_live()) {
      token_.resize(footprint_for(elements_.capacity()));
    } else {
      token_ = acct_register(footprint_for(elements_.capacity()));
    }
  }

  std::vector<T> elements_;
  AllocationToken token_;
};

/// `a` followed by `b`; neither input changes. Mixing element types does not compile.
template <class T>
Vector<T> concat(const Vector<T>& a, const Vector<T>& b) {
  Vector<T> result;
  result.reserve(a.size() + b.size());
  result.append(a);
  result.append(b);
  return result;
}

}  // namespace pa
