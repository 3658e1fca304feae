#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pa/accounting.hpp"
#include "pa/compact_table.hpp"
#include "pa/error.hpp"
#include "pa/vector.hpp"
#include "pa/wire.hpp"

namespace pa {

template <class S>
concept TrieSymbol = std::unsigned_integral<S> && !std::same_as<S, bool> &&
                     (sizeof(S) == 1 || sizeof(S) == 2 || sizeof(S) == 4 || sizeof(S) == 8);

/// Bidirectional map between symbol strings and consecutive indices 0, 1, 2, ...
///
/// Indices are handed out in first-insertion order. Each node keeps its
/// children in a CompactTable keyed by symbol and remembers its parent and
/// incoming symbol, so string_of() walks back to the root. A proper prefix of
/// an inserted string has no index until it is inserted itself.
template <TrieSymbol Symbol>
class Trie {
 public:
  using Index = std::uint64_t;
  static constexpr std::size_t symbol_width = sizeof(Symbol);

  Trie() : token_(acct_register(footprint_for(0))) { add_node(kNoNode, 0); }

  Trie(const Trie& other)
      : nodes_(other.nodes_),
        index_to_node_(other.index_to_node_),
        token_(acct_register(footprint_for(nodes_.capacity()))) {}

  Trie& operator=(const Trie& other) {
    if (this != &other) {
      Trie copy(other);
      *this = std::move(copy);
    }
    return *this;
  }
  Trie(Trie&&) noexcept = default;
  Trie& operator=(Trie&&) noexcept = default;

  std::size_t size() const noexcept { return index_to_node_.size(); }

  /// Index of `text`, assigning the next one if it has not been seen.
  Index index_of(std::span<const Symbol> text) {
    NodeId node = kRoot;
    for (Symbol symbol : text) {
      if (const NodeId* child = nodes_[node].children.find(symbol)) {
        node = *child;
      } else {
        const NodeId created = add_node(node, symbol);
        nodes_[node].children.insert(symbol, created);
        node = created;
      }
    }
    Node& terminal = nodes_[node];
    if (terminal.index == kUnassigned) {
      terminal.index = index_to_node_.size();
      index_to_node_.push_back(node);
    }
    return terminal.index;
  }

  Index index_of(std::initializer_list<Symbol> text) {
    return index_of(std::span<const Symbol>(text.begin(), text.size()));
  }

  std::optional<Index> find(std::span<const Symbol> text) const {
    NodeId node = kRoot;
    for (Symbol symbol : text) {
      const NodeId* child = nodes_[node].children.find(symbol);
      if (child == nullptr) {
        return std::nullopt;
      }
      node = *child;
    }
    if (nodes_[node].index == kUnassigned) {
      return std::nullopt;
    }
    return nodes_[node].index;
  }

  std::optional<Index> find(std::initializer_list<Symbol> text) const {
    return find(std::span<const Symbol>(text.begin(), text.size()));
  }

  std::vector<Symbol> string_of(Index index) const {
    if (index >= size()) {
      throw std::out_of_range("Trie::string_of index " + std::to_string(index) + " >= size " +
                              std::to_string(size()));
    }
    std::vector<Symbol> text;
    for (NodeId node = index_to_node_[index]; node != kRoot; node = nodes_[node].parent) {
      text.push_back(nodes_[node].edge);
    }
    std::reverse(text.begin(), text.end());
    return text;
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// size, then each string in index order as (u64 length, big-endian symbols).
  void write(WireWriter& out) const {
    out.write_u64(size());
    for (Index i = 0; i < size(); ++i) {
      const auto text = string_of(i);
      out.write_u64(text.size());
      for (Symbol symbol : text) {
        out.write_uint(symbol, symbol_width);
      }
    }
  }

  static Trie read(WireReader& in) {
    const std::uint64_t count = in.read_u64();
    in.require_items(count, 8);
    Trie trie;
    std::vector<Symbol> text;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t length = in.read_u64();
      in.require_items(length, symbol_width);
      text.resize(static_cast<std::size_t>(length));
      for (auto& symbol : text) {
        symbol = static_cast<Symbol>(in.read_uint(symbol_width));
      }
      if (trie.index_of(text) != i) {
        throw decode_error("Trie stream repeats a string at position " + std::to_string(i));
      }
    }
    return trie;
  }

  friend bool operator==(const Trie& a, const Trie& b) {
    if (a.size() != b.size()) {
      return false;
    }
    for (Index i = 0; i < a.size(); ++i) {
      if (a.string_of(i) != b.string_of(i)) {
        return false;
      }
    }
    return true;
  }

 private:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
  static constexpr Index kUnassigned = std::numeric_limits<Index>::max();

  struct Node {
    CompactTable<Symbol, NodeId> children;
    NodeId parent = kNoNode;
    Symbol edge = 0;
    Index index = kUnassigned;
  };

  static constexpr std::uint64_t footprint_for(std::size_t capacity) {
    return capacity * sizeof(Node) + sizeof(Trie);
  }

  NodeId add_node(NodeId parent, Symbol edge) {
    if (nodes_.size() >= kNoNode) {
      throw std::length_error("Trie node count exhausted");
    }
    nodes_.push_back(Node{CompactTable<Symbol, NodeId>(), parent, edge, kUnassigned});
    token_.resize(footprint_for(nodes_.capacity()));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  Vector<NodeId> index_to_node_;
  AllocationToken token_;
};

}  // namespace pa
