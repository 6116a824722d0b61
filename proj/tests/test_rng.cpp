#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "moead/rng.hpp"

namespace {

// Reference splitmix64 step, written out independently of the header.
uint64_t ref_splitmix(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("rng first output matches the xoshiro256** definition") {
  for (uint64_t seed : {uint64_t{0}, uint64_t{1}, uint64_t{0xdeadbeefULL}}) {
    uint64_t sm = seed;
    uint64_t s[4];
    for (auto& w : s) w = ref_splitmix(sm);
    const auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const uint64_t expected = rotl(s[1] * 5, 7) * 9;
    moead::Rng rng(seed);
    REQUIRE(rng.next_u64() == expected);
  }
}

TEST_CASE("rng streams are deterministic per seed") {
  moead::Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  REQUIRE(all_equal);
  REQUIRE(any_diff);
}

TEST_CASE("child streams are reproducible and mutually distinct") {
  moead::Rng root(77);
  moead::Rng c1 = root.child(0);
  moead::Rng c1again = moead::Rng(77).child(0);
  moead::Rng c2 = root.child(1);
  REQUIRE(c1.seed() == c1again.seed());
  REQUIRE(c1.seed() != c2.seed());
  REQUIRE(c1.next_u64() == c1again.next_u64());
  REQUIRE(c1.next_u64() != c2.next_u64());

  // child derivation must not disturb or depend on the parent's position
  moead::Rng p1(99), p2(99);
  (void)p1.child(5);
  REQUIRE(p1.next_u64() == p2.next_u64());

  std::set<uint64_t> seeds;
  for (uint64_t k = 0; k < 5000; ++k) seeds.insert(moead::mix_seed(42, k));
  REQUIRE(seeds.size() == 5000);
}

TEST_CASE("next_double covers [0,1) with the right mean") {
  moead::Rng rng(2024);
  double sum = 0.0;
  double lo = 1.0, hi = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // mean has sd ~ 1/sqrt(12*draws) ~ 0.0009; 0.01 is > 10 sigma
  REQUIRE(std::abs(sum / draws - 0.5) < 0.01);
  REQUIRE(lo < 0.01);
  REQUIRE(hi > 0.99);
}

TEST_CASE("next_below is bounded and roughly uniform") {
  moead::Rng rng(5);
  REQUIRE(rng.next_below(1) == 0);
  const uint64_t bound = 10;
  std::vector<int> counts(bound, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const uint64_t v = rng.next_below(bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  const double expected = static_cast<double>(draws) / bound;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / bound));
  for (uint64_t v = 0; v < bound; ++v)
    REQUIRE(std::abs(counts[v] - expected) < 5.0 * sigma);

  // bounds that are not powers of two must still hit their endpoints
  moead::Rng rng2(6);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng2.next_below(3));
  REQUIRE(seen == std::set<uint64_t>{0, 1, 2});
}
