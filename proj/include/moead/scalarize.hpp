#pragma once

// Decomposition machinery: weight vector generation, the Chebyshev
// scalarization, weight-space neighborhoods, and the running reference point.
//
// Weight generation methods:
//  - lattice: simplex lattice with the largest resolution H such that
//    C(H+M-1, M-1) <= mu, enumerated lexicographically with the first
//    component descending; topped up with low-discrepancy vectors when the
//    lattice has fewer than mu points. H = 0 degenerates to the centroid.
//  - lowdisc: scrambled Halton points in [0,1]^(M-1) mapped to the simplex
//    via sorted-coordinate spacings (uniform on the simplex for uniform
//    inputs). Digit permutations fix 0 and are derived from a constant
//    scramble seed, so the sequence is reproducible.
//  - auto: lattice for M <= 2, lowdisc for M >= 3 (lattices get too coarse).
//
// boundary indices: for each objective m, the index of the vector maximizing
// component m (ties: lower index), deduplicated preserving objective order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "objective.hpp"
#include "rng.hpp"

namespace moead {

// Additive offset keeping the reference point strictly above every seen
// objective value.
inline constexpr double kReferenceOffset = 1e-6;

enum class WeightMethod { Auto, Lattice, LowDiscrepancy };

inline WeightMethod parse_weight_method(const std::string& s) {
  if (s == "auto") return WeightMethod::Auto;
  if (s == "lattice") return WeightMethod::Lattice;
  if (s == "lowdisc") return WeightMethod::LowDiscrepancy;
  throw std::invalid_argument("unknown weight method '" + s + "'");
}

inline const char* weight_method_name(WeightMethod m) {
  switch (m) {
    case WeightMethod::Auto: return "auto";
    case WeightMethod::Lattice: return "lattice";
    case WeightMethod::LowDiscrepancy: return "lowdisc";
  }
  return "?";
}

struct WeightSet {
  std::vector<std::vector<double>> vectors;
  std::vector<int> boundary;

  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
  int size() const { return static_cast<int>(vectors.size()); }
};

namespace detail {

// Seed for the Halton digit scramble; part of the on-disk reproducibility
// contract, never derived from user seeds.
inline constexpr uint64_t kHaltonScrambleSeed = 0x5eedb00c0ffee123ULL;

inline int nth_prime(int idx) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (idx < 0 || idx >= static_cast<int>(std::size(primes)))
    throw std::invalid_argument("weight generation supports at most 21 objectives");
  return primes[idx];
}

// Permutation of digits {0..b-1} fixing 0, from the global scramble seed.
inline std::vector<int> halton_permutation(int base, int dim_index) {
  std::vector<int> perm(static_cast<size_t>(base));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = Rng(kHaltonScrambleSeed).child(static_cast<uint64_t>(dim_index));
  for (int j = 1; j < base - 1; ++j) {
    const int pick = j + static_cast<int>(rng.next_below(static_cast<uint64_t>(base - j)));
    std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(pick)]);
  }
  return perm;
}

inline double scrambled_radical_inverse(uint64_t index, int base, const std::vector<int>& perm) {
  double x = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    x += perm[static_cast<size_t>(index % static_cast<uint64_t>(base))] * f;
    f /= base;
    index /= static_cast<uint64_t>(base);
  }
  return x;
}

// count low-discrepancy simplex points, Halton indices first..first+count-1.
inline void append_lowdisc(std::vector<std::vector<double>>& out, int count, int m,
                           uint64_t first) {
  const int dims = m - 1;
  std::vector<std::vector<int>> perms;
  perms.reserve(static_cast<size_t>(dims));
  for (int d = 0; d < dims; ++d)
    perms.push_back(halton_permutation(nth_prime(d), d));
  std::vector<double> u(static_cast<size_t>(dims));
  for (int c = 0; c < count; ++c) {
    const uint64_t idx = first + static_cast<uint64_t>(c);
    for (int d = 0; d < dims; ++d)
      u[static_cast<size_t>(d)] = scrambled_radical_inverse(idx, nth_prime(d), perms[static_cast<size_t>(d)]);
    std::sort(u.begin(), u.end());
    std::vector<double> w(static_cast<size_t>(m));
    double prev = 0.0;
    for (int d = 0; d < dims; ++d) {
      w[static_cast<size_t>(d)] = u[static_cast<size_t>(d)] - prev;
      prev = u[static_cast<size_t>(d)];
    }
    w[static_cast<size_t>(m - 1)] = 1.0 - prev;
    out.push_back(std::move(w));
  }
}

// Largest H with C(H+M-1, M-1) <= mu; also reports that count.
inline void lattice_resolution(int mu, int m, int& h_out, uint64_t& count_out) {
  int h = 0;
  uint64_t count = 1;  // C(m-1, m-1)
  for (;;) {
    // C(h+m, m-1) from scratch; values stay tiny for sane mu.
    uint64_t next = 1;
    bool over = false;
    for (int j = 1; j <= m - 1; ++j) {
      const uint64_t num = static_cast<uint64_t>(h + 1 + j);
      if (next > std::numeric_limits<uint64_t>::max() / num) {
        over = true;
        break;
      }
      next = next * num / static_cast<uint64_t>(j);
    }
    if (over || next > static_cast<uint64_t>(mu)) break;
    ++h;
    count = next;
  }
  h_out = h;
  count_out = count;
}

inline void append_lattice_rows(std::vector<std::vector<double>>& out, int m, int h) {
  if (h == 0) {
    out.push_back(std::vector<double>(static_cast<size_t>(m), 1.0 / m));
    return;
  }
  std::vector<int> parts(static_cast<size_t>(m));
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      parts[static_cast<size_t>(pos)] = remaining;
      std::vector<double> w(static_cast<size_t>(m));
      for (int d = 0; d < m; ++d)
        w[static_cast<size_t>(d)] = static_cast<double>(parts[static_cast<size_t>(d)]) / h;
      out.push_back(std::move(w));
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      parts[static_cast<size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, h);
}

}  // namespace detail

inline WeightSet generate_weights(int mu, int m, WeightMethod method) {
  if (mu < 1) throw std::invalid_argument("generate_weights: mu must be >= 1");
  if (m < 1) throw std::invalid_argument("generate_weights: m must be >= 1");
  WeightSet ws;
  ws.vectors.reserve(static_cast<size_t>(mu));
  if (m == 1) {
    ws.vectors.assign(static_cast<size_t>(mu), std::vector<double>{1.0});
  } else {
    if (method == WeightMethod::Auto)
      method = (m == 2) ? WeightMethod::Lattice : WeightMethod::LowDiscrepancy;
    if (method == WeightMethod::Lattice) {
      int h;
      uint64_t count;
      detail::lattice_resolution(mu, m, h, count);
      detail::append_lattice_rows(ws.vectors, m, h);
      const int shortfall = mu - static_cast<int>(ws.vectors.size());
      if (shortfall > 0) detail::append_lowdisc(ws.vectors, shortfall, m, 1);
    } else {
      detail::append_lowdisc(ws.vectors, mu, m, 1);
    }
  }
  for (int obj = 0; obj < m; ++obj) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(ws.vectors.size()); ++i)
      if (ws.vectors[static_cast<size_t>(i)][static_cast<size_t>(obj)] >
          ws.vectors[static_cast<size_t>(best)][static_cast<size_t>(obj)])
        best = i;
    if (std::find(ws.boundary.begin(), ws.boundary.end(), best) == ws.boundary.end())
      ws.boundary.push_back(best);
  }
  return ws;
}

inline void write_weights(std::ostream& os, const WeightSet& ws) {
  os << "moead-weights 1\n" << ws.size() << ' ' << ws.dim() << '\n';
  char buf[40];
  for (const auto& w : ws.vectors) {
    for (size_t d = 0; d < w.size(); ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", w[d]);
      os << (d ? " " : "") << buf;
    }
    os << '\n';
  }
}

// Chebyshev scalarization, minimized: g(f | w, z) = max_m w_m * |z_m - f_m|.
// Zero exactly when f == z; with z strictly above all attainable values, a
// smaller g means f sits closer to z along direction 1/w.
inline double chebyshev(const ObjectiveVector& f, const std::vector<double>& w,
                        const std::vector<double>& z) {
  const size_t m = f.size();
  if (w.size() != m || z.size() != m)
    throw std::invalid_argument("chebyshev: dimension mismatch");
  double g = 0.0;
  for (size_t d = 0; d < m; ++d) {
    const double term = w[d] * std::abs(z[d] - f[d]);
    if (term > g) g = term;
  }
  return g;
}

struct NeighborhoodTable {
  std::vector<std::vector<int>> neighbors;  // per sub-problem, self first
  int t = 0;
};

// B_j = the T weight vectors nearest to w^j in Euclidean distance. The vector
// itself sorts strictly first (so j is always in B_j, duplicates included),
// remaining ties break toward the lower index.
inline NeighborhoodTable build_neighborhoods(const WeightSet& ws, int t) {
  const int mu = ws.size();
  if (t < 1 || t > mu) throw std::invalid_argument("build_neighborhoods: T must be in [1, mu]");
  NeighborhoodTable table;
  table.t = t;
  table.neighbors.resize(static_cast<size_t>(mu));
  std::vector<double> d2(static_cast<size_t>(mu));
  std::vector<int> order(static_cast<size_t>(mu));
  for (int j = 0; j < mu; ++j) {
    const auto& wj = ws.vectors[static_cast<size_t>(j)];
    for (int i = 0; i < mu; ++i) {
      const auto& wi = ws.vectors[static_cast<size_t>(i)];
      double s = 0.0;
      for (size_t d = 0; d < wj.size(); ++d) {
        const double diff = wj[d] - wi[d];
        s += diff * diff;
      }
      d2[static_cast<size_t>(i)] = s;
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (a == j || b == j) return a == j;
      const double da = d2[static_cast<size_t>(a)], db = d2[static_cast<size_t>(b)];
      if (da != db) return da < db;
      return a < b;
    });
    table.neighbors[static_cast<size_t>(j)].assign(order.begin(), order.begin() + t);
  }
  return table;
}

// Reference point z*: componentwise strict upper bound on every objective
// vector seen so far. Updates commute, so the final point is independent of
// observation order.
inline void update_reference(std::vector<double>& z, const ObjectiveVector& f) {
  if (z.size() != f.size()) throw std::invalid_argument("update_reference: dimension mismatch");
  for (size_t d = 0; d < z.size(); ++d) z[d] = std::max(z[d], f[d] + kReferenceOffset);
}

inline std::vector<double> init_reference(const std::vector<ObjectiveVector>& fs) {
  if (fs.empty()) throw std::invalid_argument("init_reference: empty population");
  std::vector<double> z(fs.front().size(), -std::numeric_limits<double>::infinity());
  for (const auto& f : fs) update_reference(z, f);
  return z;
}

}  // namespace moead
