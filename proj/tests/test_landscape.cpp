#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <stdexcept>

#include "moead/landscape.hpp"
#include "oracles.hpp"

using moead::NkInstance;
using moead::NkSpec;

TEST_CASE("spec validation rejects bad parameters") {
  REQUIRE_THROWS_AS((NkSpec{0, 2, 0, 1}).validate(), std::invalid_argument);
  REQUIRE_THROWS_AS((NkSpec{10, 0, 0, 1}).validate(), std::invalid_argument);
  REQUIRE_THROWS_AS((NkSpec{10, 2, -1, 1}).validate(), std::invalid_argument);
  REQUIRE_THROWS_AS((NkSpec{10, 2, 10, 1}).validate(), std::invalid_argument);
  REQUIRE_NOTHROW((NkSpec{10, 2, 9, 1}).validate());
  REQUIRE_NOTHROW((NkSpec{1, 1, 0, 0}).validate());
}

TEST_CASE("generated instances satisfy the structural invariants") {
  for (const NkSpec spec : {NkSpec{12, 2, 3, 5}, NkSpec{30, 3, 0, 6}, NkSpec{8, 1, 7, 7}}) {
    const NkInstance inst = moead::generate_instance(spec);
    REQUIRE(inst.spec() == spec);
    REQUIRE(inst.table_size() == (1 << (spec.k + 1)));
    for (int m = 0; m < spec.m; ++m) {
      for (int i = 0; i < spec.n; ++i) {
        const int* l = inst.links(m, i);
        for (int j = 0; j < spec.k; ++j) {
          REQUIRE(l[j] >= 0);
          REQUIRE(l[j] < spec.n);
          REQUIRE(l[j] != i);
          if (j > 0) REQUIRE(l[j] > l[j - 1]);
        }
        const double* t = inst.table(m, i);
        for (int idx = 0; idx < inst.table_size(); ++idx) {
          REQUIRE(t[idx] >= 0.0);
          REQUIRE(t[idx] < 1.0);
        }
      }
    }
  }
}

TEST_CASE("generation is deterministic and uses one stream per (m, i)") {
  const NkSpec spec{20, 2, 2, 99};
  const NkInstance a = moead::generate_instance(spec);
  const NkInstance b = moead::generate_instance(spec);
  REQUIRE(a == b);
  const NkInstance c = moead::generate_instance(NkSpec{20, 2, 2, 100});
  REQUIRE_FALSE(a == c);

  // replaying the (m=1, i=3) substream alone reproduces its links and table
  moead::Rng stream = moead::Rng(spec.seed).child(1 * 20 + 3);
  std::vector<int> cand;
  for (int v = 0; v < 20; ++v)
    if (v != 3) cand.push_back(v);
  std::vector<int> links;
  for (int j = 0; j < spec.k; ++j) {
    const int pick = j + static_cast<int>(stream.next_below(cand.size() - j));
    std::swap(cand[j], cand[pick]);
    links.push_back(cand[j]);
  }
  std::sort(links.begin(), links.end());
  const int* got = a.links(1, 3);
  REQUIRE(std::vector<int>(got, got + spec.k) == links);
  for (int idx = 0; idx < a.table_size(); ++idx)
    REQUIRE(a.table(1, 3)[idx] == stream.next_double());
}

TEST_CASE("links are roughly uniform over the other positions") {
  // with K=1 and many objectives, each position j != i should be linked
  // from bit 0 about equally often
  const NkSpec spec{10, 400, 1, 13};
  const NkInstance inst = moead::generate_instance(spec);
  std::vector<int> hits(10, 0);
  for (int m = 0; m < spec.m; ++m) ++hits[inst.links(m, 0)[0]];
  REQUIRE(hits[0] == 0);
  const double expected = 400.0 / 9.0;  // ~44.4
  for (int v = 1; v < 10; ++v)
    REQUIRE(std::abs(hits[v] - expected) < 5.0 * std::sqrt(expected));
}

TEST_CASE("evaluation matches the direct-definition oracle bit for bit") {
  for (const NkSpec spec : {NkSpec{10, 2, 0, 3}, NkSpec{9, 3, 2, 4}, NkSpec{8, 2, 4, 11}}) {
    const NkInstance inst = moead::generate_instance(spec);
    for (const moead::Genotype& g : oracle::all_genotypes(spec.n)) {
      const moead::ObjectiveVector lib = inst.evaluate(g);
      const moead::ObjectiveVector ref = oracle::nk_evaluate(inst, g);
      REQUIRE(lib == ref);
      for (double v : lib) {
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
      }
    }
  }
}

TEST_CASE("evaluate validates genotype length") {
  const NkInstance inst = moead::generate_instance(NkSpec{10, 2, 1, 1});
  REQUIRE_THROWS_AS(inst.evaluate(moead::Genotype(9)), std::invalid_argument);
}

TEST_CASE("serialization round trips exactly and is byte-stable") {
  const NkSpec spec{14, 2, 3, 123456789};
  const NkInstance inst = moead::generate_instance(spec);
  std::ostringstream s1, s2;
  moead::save_instance(inst, s1);
  moead::save_instance(inst, s2);
  REQUIRE(s1.str() == s2.str());

  std::istringstream in(s1.str());
  const NkInstance back = moead::load_instance(in);
  REQUIRE(back == inst);
}

TEST_CASE("loader rejects malformed input") {
  const NkSpec spec{6, 2, 1, 3};
  const NkInstance inst = moead::generate_instance(spec);
  std::ostringstream os;
  moead::save_instance(inst, os);
  const std::string good = os.str();

  {
    std::istringstream bad("nonsense 9\n");
    REQUIRE_THROWS_WITH(moead::load_instance(bad),
                        Catch::Matchers::ContainsSubstring("format header"));
  }
  {
    // drop the trailing end marker and final table line
    std::string truncated = good.substr(0, good.rfind("table"));
    std::istringstream bad(truncated);
    REQUIRE_THROWS(moead::load_instance(bad));
  }
  {
    std::string corrupt = good;
    const size_t pos = corrupt.find("0x");
    corrupt.replace(pos, 2, "zz");
    std::istringstream bad(corrupt);
    REQUIRE_THROWS(moead::load_instance(bad));
  }
  {
    std::istringstream empty("");
    REQUIRE_THROWS(moead::load_instance(empty));
  }
}
