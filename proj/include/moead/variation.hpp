#pragma once

// Variation operators on bit-string genotypes. All randomness flows through
// the caller's Rng with a fixed draw discipline, so runs replay exactly:
// mating_select consumes 1 draw, two_point_crossover consumes 2 (segment,
// then coin), bit_flip_mutation consumes one draw per bit.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "genotype.hpp"
#include "rng.hpp"

namespace moead {

struct MatingPair {
  Genotype first;   // the sub-problem's incumbent
  Genotype second;  // uniform from the neighborhood (may equal first)
};

// Parent one is the incumbent of sub-problem i; parent two is the incumbent
// of a uniformly drawn neighbor (i itself included since i is in B_i).
inline MatingPair mating_select(int i, const std::vector<int>& neighborhood,
                                const std::vector<Genotype>& population, Rng& rng) {
  if (neighborhood.empty()) throw std::invalid_argument("mating_select: empty neighborhood");
  const int j = neighborhood[static_cast<size_t>(rng.next_below(neighborhood.size()))];
  return MatingPair{population[static_cast<size_t>(i)], population[static_cast<size_t>(j)]};
}

namespace detail {

inline uint64_t word_mask(int from, int to) {  // bits [from, to) within one word
  const int count = to - from;
  if (count <= 0) return 0;
  const uint64_t ones = (count >= 64) ? ~uint64_t{0} : ((uint64_t{1} << count) - 1);
  return ones << from;
}

}  // namespace detail

// Classic two-point crossover. The cut pair (a, b) with 0 <= a <= b <= N is
// uniform over all (N+1)(N+2)/2 ordered pairs; the exchanged segment is
// [a, b), so a == b returns one parent unchanged. One of the two
// complementary children is kept, chosen by a fair coin.
inline Genotype two_point_crossover(const Genotype& p1, const Genotype& p2, Rng& rng) {
  const int n = p1.size();
  if (p2.size() != n) throw std::invalid_argument("two_point_crossover: length mismatch");
  const uint64_t pairs = static_cast<uint64_t>(n + 1) * static_cast<uint64_t>(n + 2) / 2;
  uint64_t r = rng.next_below(pairs);
  int a = 0;
  while (r >= static_cast<uint64_t>(n + 1 - a)) {
    r -= static_cast<uint64_t>(n + 1 - a);
    ++a;
  }
  const int b = a + static_cast<int>(r);
  const bool swap_roles = rng.next_below(2) == 1;
  const Genotype& outer = swap_roles ? p2 : p1;
  const Genotype& inner = swap_roles ? p1 : p2;
  Genotype child(n);
  const size_t nwords = child.words().size();
  for (size_t w = 0; w < nwords; ++w) {
    const int lo = static_cast<int>(w) * 64;
    const int from = std::max(a - lo, 0);
    const int to = std::min(b - lo, 64);
    const uint64_t mask = detail::word_mask(from, to);
    child.words()[w] = (outer.words()[w] & ~mask) | (inner.words()[w] & mask);
  }
  return child;
}

// Independent per-bit flips; the default engine rate is 1/N. Consumes exactly
// n draws regardless of rate, keeping downstream draws aligned.
inline Genotype bit_flip_mutation(const Genotype& x, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw std::invalid_argument("bit_flip_mutation: rate must be in [0, 1]");
  Genotype y = x;
  for (int i = 0; i < x.size(); ++i)
    if (rng.next_double() < rate) y.flip(i);
  return y;
}

}  // namespace moead
