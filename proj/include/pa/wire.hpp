#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "pa/error.hpp"

// Portable self-delimiting binary encoding.
//
// Integers are fixed width and big-endian. A block is an 8-byte length
// followed by the payload. Nothing is compressed, so identical inputs always
// produce identical bytes.
namespace pa {

using Bytes = std::vector<std::uint8_t>;

inline bool is_wire_width(std::size_t width) noexcept {
  return width == 1 || width == 2 || width == 4 || width == 8;
}

class WireWriter {
 public:
  WireWriter() = default;

  void write_uint(std::uint64_t value, std::size_t width) {
    if (!is_wire_width(width)) {
      throw std::invalid_argument("wire width must be 1, 2, 4 or 8");
    }
    if (width < 8 && (value >> (8 * width)) != 0) {
      throw std::out_of_range("value " + std::to_string(value) + " does not fit in " +
                              std::to_string(width) + " bytes");
    }
    for (std::size_t i = width; i-- > 0;) {
      buffer_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
  }

  void write_u8(std::uint8_t value) { write_uint(value, 1); }
  void write_u32(std::uint32_t value) { write_uint(value, 4); }
  void write_u64(std::uint64_t value) { write_uint(value, 8); }

  void write_i32(std::int32_t value) { write_u32(static_cast<std::uint32_t>(value)); }

  void write_f32(float value) { write_u32(std::bit_cast<std::uint32_t>(value)); }
  void write_f64(double value) { write_u64(std::bit_cast<std::uint64_t>(value)); }

  /// Raw bytes with no framing; the caller's format must imply the length.
  void write_raw(std::span<const std::uint8_t> bytes) {
    buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  }

  void write_block(std::span<const std::uint8_t> bytes) {
    write_u64(bytes.size());
    write_raw(bytes);
  }

  void write_block(std::string_view text) {
    write_block(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }

  /// Raw object representation of a trivially copyable value.
  template <class T>
    requires std::is_trivially_copyable_v<T>
  void write_object(const T& value) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    write_raw(raw);
  }

  std::size_t position() const noexcept { return buffer_.size(); }
  const Bytes& bytes() const noexcept { return buffer_; }
  Bytes take() noexcept { return std::move(buffer_); }

  bool flush_to(std::ostream& out) const {
    out.write(reinterpret_cast<const char*>(buffer_.data()),
              static_cast<std::streamsize>(buffer_.size()));
    return static_cast<bool>(out);
  }

 private:
  Bytes buffer_;
};

class WireReader {
 public:
  explicit WireReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  /// Slurps the rest of `in`; the reader owns the bytes.
  static WireReader from_stream(std::istream& in) {
    WireReader reader;
    reader.owned_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    reader.bytes_ = reader.owned_;
    return reader;
  }

  WireReader(const WireReader&) = delete;
  WireReader& operator=(const WireReader&) = delete;

  WireReader(WireReader&& other) noexcept
      : owned_(std::move(other.owned_)), bytes_(other.bytes_), position_(other.position_) {
    if (!owned_.empty()) {
      bytes_ = owned_;
    }
  }
  WireReader& operator=(WireReader&&) = delete;

  std::uint64_t read_uint(std::size_t width) {
    if (!is_wire_width(width)) {
      throw std::invalid_argument("wire width must be 1, 2, 4 or 8");
    }
    require(width);
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < width; ++i) {
      value = (value << 8) | bytes_[position_ + i];
    }
    position_ += width;
    return value;
  }

  std::uint8_t read_u8() { return static_cast<std::uint8_t>(read_uint(1)); }
  std::uint32_t read_u32() { return static_cast<std::uint32_t>(read_uint(4)); }
  std::uint64_t read_u64() { return read_uint(8); }
  std::int32_t read_i32() { return static_cast<std::int32_t>(read_u32()); }
  float read_f32() { return std::bit_cast<float>(read_u32()); }
  double read_f64() { return std::bit_cast<double>(read_u64()); }

  std::span<const std::uint8_t> read_raw(std::size_t count) {
    require(count);
    auto view = bytes_.subspan(position_, count);
    position_ += count;
    return view;
  }

  Bytes read_block() {
    const std::uint64_t length = read_u64();
    if (length > remaining()) {
      throw decode_error("block length " + std::to_string(length) + " exceeds remaining " +
                         std::to_string(remaining()) + " bytes");
    }
    auto view = read_raw(static_cast<std::size_t>(length));
    return Bytes(view.begin(), view.end());
  }

  template <class T>
    requires std::is_trivially_copyable_v<T> && std::is_default_constructible_v<T>
  T read_object() {
    auto view = read_raw(sizeof(T));
    T value;
    std::memcpy(&value, view.data(), sizeof(T));
    return value;
  }

  /// Decode fault unless `count` items of `item_size` bytes could still follow.
  void require_items(std::uint64_t count, std::size_t item_size) const {
    if (item_size != 0 && count > remaining() / item_size) {
      throw decode_error("stream declares " + std::to_string(count) + " items but only " +
                         std::to_string(remaining()) + " bytes remain");
    }
  }

  std::size_t position() const noexcept { return position_; }
  std::size_t remaining() const noexcept { return bytes_.size() - position_; }
  bool at_end() const noexcept { return remaining() == 0; }

 private:
  WireReader() = default;

  void require(std::size_t count) const {
    if (count > remaining()) {
      throw decode_error("truncated stream: need " + std::to_string(count) + " bytes, have " +
                         std::to_string(remaining()));
    }
  }

  Bytes owned_;
  std::span<const std::uint8_t> bytes_;
  std::size_t position_ = 0;
};

}  // namespace pa
