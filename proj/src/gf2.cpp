#include "covtrick/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace covtrick {

bool BitVector::any() const {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::optional<std::size_t> BitVector::next_set(std::size_t from) const {
  if (from >= bits_) return std::nullopt;
  std::size_t word = from / 64;
  std::uint64_t masked = words_[word] & (~std::uint64_t{0} << (from % 64));
  while (true) {
    if (masked != 0) {
      const std::size_t pos = word * 64 + static_cast<std::size_t>(std::countr_zero(masked));
      if (pos >= bits_) return std::nullopt;
      return pos;
    }
    if (++word >= words_.size()) return std::nullopt;
    masked = words_[word];
  }
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.bits_ != bits_) throw std::invalid_argument("BitVector size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::optional<std::size_t> Gf2Basis::reduce(BitVector& v) const {
  std::size_t from = 0;
  while (auto bit = v.next_set(from)) {
    const std::size_t row = pivot_row_[*bit];
    if (row == kNone) return bit;
    v ^= rows_[row];
    from = *bit + 1;
  }
  return std::nullopt;
}

bool Gf2Basis::contains(BitVector v) const {
  if (v.size() != bits_) throw std::invalid_argument("BitVector size mismatch");
  return !reduce(v).has_value();
}

bool Gf2Basis::insert(BitVector v) {
  if (v.size() != bits_) throw std::invalid_argument("BitVector size mismatch");
  const auto pivot = reduce(v);
  if (!pivot) return false;
  pivot_row_[*pivot] = rows_.size();
  rows_.push_back(std::move(v));
  return true;
}

}  // namespace covtrick
