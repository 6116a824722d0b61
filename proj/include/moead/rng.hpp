#pragma once

// Seedable pseudo-random streams with reproducible substream derivation.
//
// Core generator is xoshiro256** (Blackman & Vigna, public domain reference
// implementation) seeded through splitmix64 so that any 64-bit seed, zero
// included, yields a well-mixed nonzero state. Every generator remembers the
// seed it was built from; child(key) derives the seed of an independent
// substream as mix_seed(seed, key). Two children of the same parent collide
// only if their keys collide, which callers avoid by construction (e.g. one
// key per (objective, bit) pair when generating landscape tables).
//
// All integer paths are exact 64-bit arithmetic and next_double maps the top
// 53 bits onto [0,1) multiples of 2^-53, so streams are identical on every
// conforming platform.

#include <cassert>
#include <cstdint>

namespace moead {

inline constexpr uint64_t kSplitmixGamma = 0x9e3779b97f4a7c15ULL;

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += kSplitmixGamma);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for the substream of `seed` identified by `key`.
// key+1 keeps key 0 from collapsing onto the parent's own splitmix walk.
inline uint64_t mix_seed(uint64_t seed, uint64_t key) {
  uint64_t s = seed ^ (kSplitmixGamma * (key + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b >> 1);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the 2^53 grid points k*2^-53 in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound >= 1. Unbiased via rejection of the
  // short final cycle of the modulus (threshold = 2^64 mod bound).
  uint64_t next_below(uint64_t bound) {
    assert(bound > 0);
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Independent generator for the substream identified by key.
  Rng child(uint64_t key) const { return Rng(mix_seed(seed_, key)); }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t seed_;
  uint64_t state_[4];
};

}  // namespace moead
