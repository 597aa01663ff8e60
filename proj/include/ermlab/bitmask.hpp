#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ermlab {

/// Fixed-width bitmask over base-set indices (the subset V of W). Bits beyond
/// size() are kept zero so equality and popcount work word-wise.
class Bitmask {
 public:
  Bitmask() = default;
  explicit Bitmask(int n) : n_(n), words_((n + 63) / 64, 0) {
    if (n < 0) throw std::invalid_argument("Bitmask: negative size");
  }

  int size() const { return n_; }

  bool test(int i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(int i, bool value = true) {
    check_index(i);
    if (value)
      words_[i >> 6] |= (1ULL << (i & 63));
    else
      words_[i >> 6] &= ~(1ULL << (i & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  Bitmask& operator|=(const Bitmask& other) {
    if (other.n_ != n_) throw std::invalid_argument("Bitmask: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  bool covers_all() const { return count() == n_; }

  /// Smallest unset index, or -1 when all bits are set.
  int first_unset() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t inv = ~words_[w];
      if (inv == 0) continue;
      int i = static_cast<int>(w) * 64 + std::countr_zero(inv);
      return i < n_ ? i : -1;
    }
    return -1;
  }

  template <class F>
  void for_each_set(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int i = static_cast<int>(w) * 64 + std::countr_zero(bits);
        fn(i);
        bits &= bits - 1;
      }
    }
  }

  /// Hex encoding, two characters per byte, byte j holding bits 8j..8j+7.
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    int nbytes = (n_ + 7) / 8;
    std::string out(2 * nbytes, '0');
    for (int b = 0; b < nbytes; ++b) {
      unsigned byte = static_cast<unsigned>((words_[b >> 3] >> ((b & 7) * 8)) & 0xFF);
      out[2 * b] = digits[byte >> 4];
      out[2 * b + 1] = digits[byte & 0xF];
    }
    return out;
  }

  static Bitmask from_hex(const std::string& hex, int n) {
    Bitmask mask(n);
    int nbytes = (n + 7) / 8;
    if (static_cast<int>(hex.size()) != 2 * nbytes)
      throw std::invalid_argument("Bitmask: hex length does not match size");
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw std::invalid_argument("Bitmask: bad hex digit");
    };
    for (int b = 0; b < nbytes; ++b) {
      unsigned byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
      mask.words_[b >> 3] |= static_cast<std::uint64_t>(byte) << ((b & 7) * 8);
    }
    for (int i = n; i < 8 * nbytes && i < 64 * static_cast<int>(mask.words_.size()); ++i)
      if (mask.test_raw(i))
        throw std::invalid_argument("Bitmask: set bit beyond declared size");
    return mask;
  }

  std::uint64_t digest() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xFF;
        h *= 0x100000001B3ULL;
      }
    };
    mix(static_cast<std::uint64_t>(n_));
    for (auto w : words_) mix(w);
    return h;
  }

  bool operator==(const Bitmask&) const = default;

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("Bitmask: index out of range");
  }
  bool test_raw(int i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ermlab
