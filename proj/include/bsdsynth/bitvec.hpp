#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bsdsynth {

/// Fixed-width vector of bits, index 0 first.
///
/// Text form writes bit i as character i (left to right), which is the
/// convention used by .ios files and by counterexample lines.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t width);

  static BitVec from_string(std::string_view bits);
  /// Bit i of the result is bit i of `value`.
  static BitVec from_uint(std::uint64_t value, std::size_t width);

  std::size_t width() const noexcept { return width_; }
  bool empty() const noexcept { return width_ == 0; }

  bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const noexcept;
  /// Number of positions where the two vectors differ; widths must match.
  std::size_t hamming(const BitVec& other) const;

  /// Low 64 bits as an integer (bit i -> 2^i).
  std::uint64_t to_uint() const noexcept { return words_.empty() ? 0 : words_[0]; }
  /// Bits [offset, offset + count) as an integer, count <= 64.
  std::uint64_t slice(std::size_t offset, std::size_t count) const noexcept;
  void assign_slice(std::size_t offset, std::size_t count, std::uint64_t value) noexcept;

  std::string to_string() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b);

 private:
  std::vector<std::uint64_t> words_;
  std::size_t width_ = 0;
};

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const noexcept;
};

/// Total Hamming distance between two equally shaped sequences of vectors.
std::size_t hamming(std::span<const BitVec> u, std::span<const BitVec> v);
/// Hamming distance between two equal-length sequences of single bits.
std::size_t hamming(const std::vector<bool>& u, const std::vector<bool>& v);

}  // namespace bsdsynth
