#pragma once

// Bit-packed vectors over GF(2) and an incremental row-echelon basis.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace covtrick {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool any() const;
  std::size_t count() const;
  /// Lowest set bit at position >= from, if any.
  std::optional<std::size_t> next_set(std::size_t from) const;
  BitVector& operator^=(const BitVector& other);
  bool operator==(const BitVector& other) const = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Basis kept in echelon form keyed by lowest set bit. Rows are never
/// reordered, so insertion order is reproducible.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t bits) : bits_(bits), pivot_row_(bits, kNone) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t bits() const { return bits_; }

  /// True iff v lies in the span of the rows.
  bool contains(BitVector v) const;
  /// Inserts v if independent; returns whether the rank grew.
  bool insert(BitVector v);

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  /// Eliminates pivots from v; returns the first unpivoted set bit.
  std::optional<std::size_t> reduce(BitVector& v) const;

  std::size_t bits_;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> pivot_row_;
};

}  // namespace covtrick
