#pragma once

// Fixed-length bit strings packed into 64-bit words, plus the hex text form
// used by archive CSV files.
//
// Bit i lives in words()[i / 64] at bit position i % 64. Unused high bits of
// the last word are always zero, which makes operator== and hashing plain
// word comparisons.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace moead {

class Genotype {
 public:
  Genotype() = default;

  explicit Genotype(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Genotype: length must be positive");
    words_.assign((static_cast<size_t>(n) + 63) / 64, 0);
  }

  int size() const { return n_; }

  bool get(int i) const { return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u; }

  void set(int i, bool value) {
    const uint64_t mask = uint64_t{1} << (i & 63);
    if (value)
      words_[static_cast<size_t>(i) >> 6] |= mask;
    else
      words_[static_cast<size_t>(i) >> 6] &= ~mask;
  }

  void flip(int i) { words_[static_cast<size_t>(i) >> 6] ^= uint64_t{1} << (i & 63); }

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

  // Zeroes bits >= size() in the last word; word-level writers call this to
  // restore the padding invariant.
  void mask_tail() {
    if (n_ % 64 != 0 && !words_.empty())
      words_.back() &= (uint64_t{1} << (n_ % 64)) - 1;
  }

  bool operator==(const Genotype& other) const = default;

  // Hex encoding: one digit per 4 bits, bit 0 is the most significant bit of
  // the first digit, so "8" decodes to the single set bit 0 at any length
  // in [1,4]. Length is external (the archive CSV knows N).
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    const int ndigits = (n_ + 3) / 4;
    std::string out(static_cast<size_t>(ndigits), '0');
    for (int d = 0; d < ndigits; ++d) {
      int nibble = 0;
      for (int b = 0; b < 4; ++b) {
        const int i = d * 4 + b;
        if (i < n_ && get(i)) nibble |= 8 >> b;
      }
      out[static_cast<size_t>(d)] = digits[nibble];
    }
    return out;
  }

  static Genotype from_hex(const std::string& hex, int n) {
    Genotype g(n);
    const int ndigits = (n + 3) / 4;
    if (static_cast<int>(hex.size()) != ndigits)
      throw std::invalid_argument("Genotype::from_hex: length mismatch");
    for (int d = 0; d < ndigits; ++d) {
      const char c = hex[static_cast<size_t>(d)];
      int nibble;
      if (c >= '0' && c <= '9')
        nibble = c - '0';
      else if (c >= 'a' && c <= 'f')
        nibble = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        nibble = c - 'A' + 10;
      else
        throw std::invalid_argument("Genotype::from_hex: bad digit");
      for (int b = 0; b < 4; ++b) {
        const int i = d * 4 + b;
        const bool bit = (nibble & (8 >> b)) != 0;
        if (i < n)
          g.set(i, bit);
        else if (bit)
          throw std::invalid_argument("Genotype::from_hex: set bit past length");
      }
    }
    return g;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> words_;
};

struct GenotypeHash {
  size_t operator()(const Genotype& g) const {
    uint64_t h = 0x100000001b3ULL * static_cast<uint64_t>(g.size());
    for (uint64_t w : g.words()) {
      h ^= w;
      h *= 0x100000001b3ULL;
    }
    return static_cast<size_t>(h);
  }
};

// Each bit i.i.d. Bernoulli(1/2); consumes exactly ceil(n/64) draws.
inline Genotype random_genotype(int n, Rng& rng) {
  Genotype g(n);
  for (auto& word : g.words()) word = rng.next_u64();
  g.mask_tail();
  return g;
}

}  // namespace moead
