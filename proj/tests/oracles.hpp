#pragma once

// Independent reference implementations used to validate the library. These
// deliberately avoid the library's algorithms and RNG: hypervolume is
// estimated by Monte Carlo with std::mt19937_64, dominance filtering is the
// quadratic definition, NK evaluation recomputes table indices from scratch,
// and rank-sum p-values come from full enumeration over std::next_permutation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "moead/genotype.hpp"
#include "moead/landscape.hpp"
#include "moead/objective.hpp"

namespace oracle {

// Direct-definition NK evaluation: walk the documented index packing bit by bit.
// Accumulation order matches the documented contract (ascending i, divide
// once at the end), so results must be bit-identical to the library's.
inline moead::ObjectiveVector nk_evaluate(const moead::NkInstance& inst,
                                          const moead::Genotype& x) {
  const moead::NkSpec& spec = inst.spec();
  moead::ObjectiveVector f(static_cast<size_t>(spec.m));
  for (int m = 0; m < spec.m; ++m) {
    double total = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      const int* links = inst.links(m, i);
      int idx = 0;
      if (x.get(i)) idx += 1 << spec.k;
      for (int j = 0; j < spec.k; ++j)
        if (x.get(links[j])) idx += 1 << (spec.k - 1 - j);
      total += inst.table(m, i)[idx];
    }
    f[static_cast<size_t>(m)] = total / spec.n;
  }
  return f;
}

// All 2^n genotypes of length n (n <= 20), in counter order.
inline std::vector<moead::Genotype> all_genotypes(int n) {
  if (n > 20) throw std::invalid_argument("all_genotypes: too many");
  std::vector<moead::Genotype> out;
  out.reserve(size_t{1} << n);
  for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
    moead::Genotype g(n);
    for (int i = 0; i < n; ++i)
      if (bits & (uint64_t{1} << i)) g.set(i, true);
    out.push_back(std::move(g));
  }
  return out;
}

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Monte Carlo hypervolume over [0,1]^m with the origin reference: the
// fraction of uniform samples covered by some front point.
inline McEstimate mc_hypervolume(const std::vector<moead::ObjectiveVector>& front, int m,
                                 uint64_t samples, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pt(static_cast<size_t>(m));
  uint64_t hits = 0;
  for (uint64_t s = 0; s < samples; ++s) {
    for (int d = 0; d < m; ++d) pt[static_cast<size_t>(d)] = unif(gen);
    for (const auto& p : front) {
      bool covered = true;
      for (int d = 0; d < m; ++d)
        if (pt[static_cast<size_t>(d)] > p[static_cast<size_t>(d)]) {
          covered = false;
          break;
        }
      if (covered) {
        ++hits;
        break;
      }
    }
  }
  McEstimate e;
  const double phat = static_cast<double>(hits) / static_cast<double>(samples);
  e.value = phat;
  e.stderr_ = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  return e;
}

// Quadratic-time maximal set with exact-duplicate removal.
inline std::vector<moead::ObjectiveVector> pareto_front(
    const std::vector<moead::ObjectiveVector>& pts) {
  auto dominates = [](const moead::ObjectiveVector& a, const moead::ObjectiveVector& b) {
    bool strict = false;
    for (size_t d = 0; d < a.size(); ++d) {
      if (a[d] < b[d]) return false;
      if (a[d] > b[d]) strict = true;
    }
    return strict;
  };
  std::vector<moead::ObjectiveVector> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (size_t j = 0; j < pts.size() && keep; ++j)
      if (j != i && dominates(pts[j], pts[i])) keep = false;
    for (size_t j = 0; j < i && keep; ++j)
      if (pts[j] == pts[i]) keep = false;
    if (keep) out.push_back(pts[i]);
  }
  return out;
}

// Recursive slab hypervolume bottoming out at an area sweep; independent of
// the library's staircase algorithm.
inline double hv_recursive(std::vector<moead::ObjectiveVector> pts, int m) {
  pts = pareto_front(pts);
  if (pts.empty()) return 0.0;
  if (m == 1) {
    double best = 0.0;
    for (const auto& p : pts) best = std::max(best, p[0]);
    return best;
  }
  std::sort(pts.begin(), pts.end(),
            [m](const moead::ObjectiveVector& a, const moead::ObjectiveVector& b) {
              return a[static_cast<size_t>(m - 1)] > b[static_cast<size_t>(m - 1)];
            });
  double volume = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double z = pts[i][static_cast<size_t>(m - 1)];
    const double znext = (i + 1 < pts.size()) ? pts[i + 1][static_cast<size_t>(m - 1)] : 0.0;
    if (z <= znext) continue;
    std::vector<moead::ObjectiveVector> proj;
    for (size_t j = 0; j <= i; ++j)
      proj.emplace_back(pts[j].begin(), pts[j].end() - 1);
    volume += (z - znext) * hv_recursive(std::move(proj), m - 1);
  }
  return volume;
}

// Exact conditional two-sided rank-sum p-value by enumerating every
// assignment of pooled mid-ranks to the first sample via next_permutation
// over a 0/1 selector (distinct arrangements of a multiset).
inline double exact_wilcoxon_p(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size(), total = n + b.size();
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<size_t> order(total);
  for (size_t i = 0; i < total; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> rank(total);
  size_t i = 0;
  while (i < total) {
    size_t j = i;
    while (j + 1 < total && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  double r1 = 0.0;
  for (size_t k = 0; k < n; ++k) r1 += rank[k];
  const double mean = static_cast<double>(n) * static_cast<double>(total + 1) / 2.0;
  const double observed = std::abs(r1 - mean);

  std::vector<int> selector(total, 0);
  for (size_t k = 0; k < n; ++k) selector[k] = 1;
  std::sort(selector.begin(), selector.end());  // lowest permutation first
  uint64_t count = 0, denom = 0;
  do {
    double sum = 0.0;
    for (size_t k = 0; k < total; ++k)
      if (selector[k]) sum += rank[k];
    ++denom;
    if (std::abs(sum - mean) >= observed - 1e-9) ++count;
  } while (std::next_permutation(selector.begin(), selector.end()));
  return static_cast<double>(count) / static_cast<double>(denom);
}

// Upper-tail regularized incomplete gamma Q(a, x) via series / continued
// fraction; chi-square survival function for goodness-of-fit checks.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, del = 1.0 / a, sum = del;
    for (int it = 0; it < 1000; ++it) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  const double fpmin = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
  for (int it = 1; it <= 1000; ++it) {
    const double an = -static_cast<double>(it) * (static_cast<double>(it) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

inline double chi2_survival(double statistic, double dof) {
  return gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace oracle
