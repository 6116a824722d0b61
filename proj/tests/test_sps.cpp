#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "moead/rng.hpp"
#include "moead/sps.hpp"

using moead::Rng;
using moead::SpsHistory;

TEST_CASE("select_all sweeps every sub-problem in order") {
  const std::vector<int> sel = moead::select_all(5);
  REQUIRE(sel == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("selection argument validation") {
  Rng rng(1);
  const std::vector<int> boundary{0, 9};
  REQUIRE_THROWS_AS(moead::select_rnd(10, 0, boundary, 0, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(moead::select_rnd(10, 11, boundary, 0, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(moead::select_rnd(10, 3, {10}, 0, rng), std::invalid_argument);
  SpsHistory h = moead::make_history(std::vector<double>(5, 1.0));
  REQUIRE_THROWS_AS(moead::select_dra(h, 10, 3, boundary, 0, rng), std::invalid_argument);
}

TEST_CASE("select_rnd keeps all boundary indices and fills without replacement") {
  Rng rng(3);
  const std::vector<int> boundary{0, 9};
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<int> sel = moead::select_rnd(10, 6, boundary, rep, rng);
    REQUIRE(sel.size() == 6);
    REQUIRE(sel[0] == 0);
    REQUIRE(sel[1] == 9);
    const std::set<int> unique(sel.begin(), sel.end());
    REQUIRE(unique.size() == 6);  // no duplicates
    for (int i : sel) {
      REQUIRE(i >= 0);
      REQUIRE(i < 10);
    }
  }
  // lambda == mu selects everything
  const std::vector<int> all = moead::select_rnd(10, 10, boundary, 0, rng);
  const std::set<int> unique(all.begin(), all.end());
  REQUIRE(unique.size() == 10);
}

TEST_CASE("boundary rotation when lambda is below the boundary count") {
  Rng rng(4);
  const std::vector<int> boundary{2, 5, 7};
  // lambda=1: generations cycle 2,5,7,2,5,7,...
  for (uint64_t g = 0; g < 9; ++g) {
    const std::vector<int> sel = moead::select_rnd(10, 1, boundary, g, rng);
    REQUIRE(sel == std::vector<int>{boundary[g % 3]});
  }
  // lambda=2: start index advances by 2 each generation, wrapping fairly
  std::vector<int> visits(10, 0);
  for (uint64_t g = 0; g < 300; ++g) {
    const std::vector<int> sel = moead::select_rnd(10, 2, boundary, g, rng);
    REQUIRE(sel.size() == 2);
    REQUIRE(sel[0] != sel[1]);
    for (int i : sel) ++visits[i];
  }
  REQUIRE(visits[2] == 200);
  REQUIRE(visits[5] == 200);
  REQUIRE(visits[7] == 200);

  // rotation consumes no randomness
  Rng before(8), after(8);
  (void)moead::select_rnd(10, 1, boundary, 17, after);
  REQUIRE(before.next_u64() == after.next_u64());

  // dra degrades to the identical rotation
  SpsHistory h = moead::make_history(std::vector<double>(10, 1.0));
  Rng r2(9);
  for (uint64_t g = 0; g < 9; ++g)
    REQUIRE(moead::select_dra(h, 10, 1, boundary, g, r2) ==
            std::vector<int>{boundary[g % 3]});
}

TEST_CASE("select_dra prefers high-utility sub-problems") {
  // pool is small enough that every tournament sees all candidates, so the
  // single highest-utility non-boundary index must always win the last slot
  SpsHistory h = moead::make_history(std::vector<double>(12, 0.5));
  std::fill(h.utility.begin(), h.utility.end(), 0.5);
  h.utility[6] = 1.0;
  const std::vector<int> boundary{0, 11};
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<int> sel = moead::select_dra(h, 12, 3, boundary, rep, rng);
    REQUIRE(sel.size() == 3);
    REQUIRE(sel[0] == 0);
    REQUIRE(sel[1] == 11);
    REQUIRE(sel[2] == 6);
  }
  // with two slots, 6 wins one and the runner-up set fills the other
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<int> sel = moead::select_dra(h, 12, 4, boundary, rep, rng);
    REQUIRE(std::count(sel.begin(), sel.end(), 6) == 1);
    const std::set<int> unique(sel.begin(), sel.end());
    REQUIRE(unique.size() == 4);
  }
}

TEST_CASE("dra tournament ties break uniformly") {
  // two non-boundary candidates with equal utility: each should win the
  // single slot about half the time
  SpsHistory h = moead::make_history(std::vector<double>(4, 1.0));
  const std::vector<int> boundary{0, 3};
  Rng rng(6);
  int wins1 = 0;
  const int reps = 20000;
  for (int rep = 0; rep < reps; ++rep) {
    const std::vector<int> sel = moead::select_dra(h, 4, 3, boundary, rep, rng);
    REQUIRE((sel[2] == 1 || sel[2] == 2));
    wins1 += sel[2] == 1;
  }
  REQUIRE(std::abs(wins1 - reps / 2) < 5.0 * std::sqrt(reps * 0.25));
}

TEST_CASE("utility updates follow the decay schedule") {
  SpsHistory h = moead::make_history({1.0, 1.0, 1.0, 1.0});
  REQUIRE(h.utility == std::vector<double>(4, 1.0));
  REQUIRE(h.update_interval == 50);

  // nothing changes until the interval boundary
  std::vector<double> g{1.0, 1.0, 1.0, 1.0};
  for (int gen = 1; gen < 50; ++gen) {
    moead::update_utilities(h, g);
    REQUIRE(h.utility == std::vector<double>(4, 1.0));
  }
  // generation 50: index 0 improved a lot, 1 a little, 2 stagnated,
  // 3 regressed (reference drift); snapshot was all ones
  g = {0.5, 1.0 - 0.0005, 1.0, 1.2};
  moead::update_utilities(h, g);
  REQUIRE(h.generation == 50);
  REQUIRE(h.utility[0] == 1.0);                       // delta 0.5 > 0.001
  REQUIRE(h.utility[1] == Catch::Approx(0.95 + 0.05 * 0.5));  // delta = 0.0005
  REQUIRE(h.utility[2] == Catch::Approx(0.95));
  REQUIRE(h.utility[3] == Catch::Approx(0.95));       // clamped, not below
  REQUIRE(h.snapshot_g == g);

  // repeated stagnation decays geometrically but never leaves (0, 1]
  for (int cycle = 0; cycle < 400; ++cycle)
    for (int gen = 0; gen < 50; ++gen) moead::update_utilities(h, g);
  for (double u : h.utility) {
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
  REQUIRE(h.utility[2] == Catch::Approx(std::pow(0.95, 401)).epsilon(1e-9));
}

TEST_CASE("utility update handles zero snapshots and recovery") {
  SpsHistory h = moead::make_history({0.0, 1.0});
  h.update_interval = 1;
  moead::update_utilities(h, {0.0, 1.0});
  REQUIRE(h.utility[0] == Catch::Approx(0.95));  // snapshot 0 counts as stagnation
  moead::update_utilities(h, {0.0, 0.5});
  REQUIRE(h.utility[1] == 1.0);  // big improvement resets to full utility
  REQUIRE_THROWS_AS(moead::update_utilities(h, {0.0}), std::invalid_argument);
}
