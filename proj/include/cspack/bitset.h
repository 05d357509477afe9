#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cspack {

/// Fixed-width bit-vector sized at construction. Used for element sets in the
/// solver, where disjointness tests dominate.
class Bitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitset() = default;
  explicit Bitset(std::size_t nbits)
      : nbits_(nbits), words_((nbits + kWordBits - 1) / kWordBits, 0) {}

  static Bitset FromIds(std::size_t nbits, std::span<const std::uint32_t> ids) {
    Bitset b(nbits);
    for (std::uint32_t id : ids) b.Set(id);
    return b;
  }

  std::size_t size() const { return nbits_; }

  void Set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void Reset(std::size_t i) {
    words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
  }
  bool Test(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1;
  }

  std::size_t Count() const {
    std::size_t c = 0;
    for (Word w : words_) c += std::popcount(w);
    return c;
  }

  bool Intersects(const Bitset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & other.words_[k]) return true;
    }
    return false;
  }

  /// Smallest element in both sets, if any.
  std::optional<std::size_t> FirstCommon(const Bitset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (Word w = words_[k] & other.words_[k]) {
        return k * kWordBits + std::countr_zero(w);
      }
    }
    return std::nullopt;
  }

  Bitset& operator|=(const Bitset& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }

  /// Clears every bit set in `other`.
  Bitset& Subtract(const Bitset& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
    return *this;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<Word> words_;
};

}  // namespace cspack
