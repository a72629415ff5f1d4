#include "bsdsynth/bitvec.hpp"

#include <bit>

#include "bsdsynth/error.hpp"

namespace bsdsynth {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InputShape: return "input-shape";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Config: return "config";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Protocol: return "protocol";
    case ErrorKind::UnknownInput: return "unknown-input";
    case ErrorKind::Format: return "format";
    case ErrorKind::Estimate: return "estimate";
    case ErrorKind::Mode: return "mode";
    case ErrorKind::PartialResult: return "partial-result";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

BitVec::BitVec(std::size_t width) : words_((width + 63) / 64, 0), width_(width) {
  if (width == 0) throw Error(ErrorKind::InputShape, "bit vector width must be at least 1");
}

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i, true);
    else if (bits[i] != '0')
      throw Error(ErrorKind::Format, "bit string may only contain '0' and '1': '" +
                                         std::string(bits) + "'");
  }
  return v;
}

BitVec BitVec::from_uint(std::uint64_t value, std::size_t width) {
  BitVec v(width);
  if (width < 64) value &= (std::uint64_t{1} << width) - 1;
  v.words_[0] = value;
  return v;
}

std::size_t BitVec::popcount() const noexcept {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::size_t BitVec::hamming(const BitVec& other) const {
  if (other.width_ != width_)
    throw Error(ErrorKind::InputShape, "hamming: width mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    count += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  return count;
}

std::uint64_t BitVec::slice(std::size_t offset, std::size_t count) const noexcept {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (get(offset + i)) out |= std::uint64_t{1} << i;
  return out;
}

void BitVec::assign_slice(std::size_t offset, std::size_t count, std::uint64_t value) noexcept {
  for (std::size_t i = 0; i < count; ++i) set(offset + i, (value >> i) & 1u);
}

std::string BitVec::to_string() const {
  std::string s(width_, '0');
  for (std::size_t i = 0; i < width_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) {
  if (auto c = a.width_ <=> b.width_; c != 0) return c;
  // Compare from the most significant word so that ordering matches to_uint for narrow vectors.
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t BitVecHash::operator()(const BitVec& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.width();
  for (auto w : v.words()) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

std::size_t hamming(std::span<const BitVec> u, std::span<const BitVec> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::InputShape, "hamming: length mismatch");
  std::size_t total = 0;
  for (std::size_t i = 0; i < u.size(); ++i) total += u[i].hamming(v[i]);
  return total;
}

std::size_t hamming(const std::vector<bool>& u, const std::vector<bool>& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::InputShape, "hamming: length mismatch");
  std::size_t total = 0;
  for (std::size_t i = 0; i < u.size(); ++i) total += u[i] != v[i];
  return total;
}

}  // namespace bsdsynth
