#pragma once

// Sub-problem selection: which of the mu decomposed problems receive an
// offspring this generation.
//
//  - all: every sub-problem, in index order (classic MOEA/D sweep).
//  - rnd: boundary sub-problems always included, the remaining slots drawn
//    uniformly without replacement from the non-boundary pool.
//  - dra: like rnd for boundary handling, but non-boundary slots are picked
//    by utility tournaments (dynamic resource allocation).
//
// When lambda is smaller than the number of boundary sub-problems, both rnd
// and dra degrade to a fair round-robin over the boundary set: generation g
// takes boundary[(g*lambda + j) % |boundary|] for j = 0..lambda-1, so every
// boundary sub-problem is visited equally often.
//
// DRA utilities pi_i live in (0,1], start at 1, and refresh every
// update_interval full generations from the relative improvement of each
// sub-problem's scalarized value since the last snapshot. Reference-point
// drift can make a frozen sub-problem's value grow; the improvement ratio is
// clamped at 0 so the decay multiplier stays within [decay, 1] and utilities
// never leave (0,1].

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace moead {

inline constexpr int kDraTournamentSize = 10;

struct SpsHistory {
  std::vector<double> utility;     // pi_i, in (0,1]
  std::vector<double> snapshot_g;  // scalarized values at the last refresh
  uint64_t generation = 0;         // full generations observed
  int update_interval = 50;
  double improvement_threshold = 1e-3;
  double decay = 0.95;
};

inline SpsHistory make_history(const std::vector<double>& initial_g) {
  SpsHistory h;
  h.utility.assign(initial_g.size(), 1.0);
  h.snapshot_g = initial_g;
  return h;
}

inline void check_selection_args(int mu, int lambda, const std::vector<int>& boundary) {
  if (mu < 1) throw std::invalid_argument("selection: mu must be >= 1");
  if (lambda < 1 || lambda > mu)
    throw std::invalid_argument("selection: lambda must be in [1, mu]");
  for (int b : boundary)
    if (b < 0 || b >= mu) throw std::invalid_argument("selection: boundary index out of range");
}

inline std::vector<int> select_all(int mu) {
  std::vector<int> out(static_cast<size_t>(mu));
  for (int i = 0; i < mu; ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

namespace detail {

inline std::vector<int> boundary_rotation(int lambda, const std::vector<int>& boundary,
                                          uint64_t generation) {
  const uint64_t nb = boundary.size();
  std::vector<int> out(static_cast<size_t>(lambda));
  const uint64_t start = generation * static_cast<uint64_t>(lambda);
  for (int j = 0; j < lambda; ++j)
    out[static_cast<size_t>(j)] = boundary[static_cast<size_t>((start + j) % nb)];
  return out;
}

inline std::vector<int> non_boundary_pool(int mu, const std::vector<int>& boundary) {
  std::vector<char> is_boundary(static_cast<size_t>(mu), 0);
  for (int b : boundary) is_boundary[static_cast<size_t>(b)] = 1;
  std::vector<int> pool;
  pool.reserve(static_cast<size_t>(mu) - boundary.size());
  for (int i = 0; i < mu; ++i)
    if (!is_boundary[static_cast<size_t>(i)]) pool.push_back(i);
  return pool;
}

}  // namespace detail

inline std::vector<int> select_rnd(int mu, int lambda, const std::vector<int>& boundary,
                                   uint64_t generation, Rng& rng) {
  check_selection_args(mu, lambda, boundary);
  const int nb = static_cast<int>(boundary.size());
  if (lambda < nb) return detail::boundary_rotation(lambda, boundary, generation);
  std::vector<int> out = boundary;
  std::vector<int> pool = detail::non_boundary_pool(mu, boundary);
  const int need = lambda - nb;
  // Partial Fisher-Yates; the prefix is a uniform sample without replacement.
  for (int j = 0; j < need; ++j) {
    const int pick = j + static_cast<int>(rng.next_below(pool.size() - static_cast<size_t>(j)));
    std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick)]);
    out.push_back(pool[static_cast<size_t>(j)]);
  }
  return out;
}

inline std::vector<int> select_dra(const SpsHistory& history, int mu, int lambda,
                                   const std::vector<int>& boundary, uint64_t generation,
                                   Rng& rng) {
  check_selection_args(mu, lambda, boundary);
  if (static_cast<int>(history.utility.size()) != mu)
    throw std::invalid_argument("select_dra: history size mismatch");
  const int nb = static_cast<int>(boundary.size());
  if (lambda < nb) return detail::boundary_rotation(lambda, boundary, generation);
  std::vector<int> out = boundary;
  std::vector<int> pool = detail::non_boundary_pool(mu, boundary);
  for (int slot = 0; slot < lambda - nb; ++slot) {
    // Tournament over up to kDraTournamentSize distinct candidates, drawn by
    // shuffling a prefix of the remaining pool. Highest utility wins; ties
    // are broken uniformly at random (reservoir rule).
    const int tsize = std::min<int>(kDraTournamentSize, static_cast<int>(pool.size()));
    for (int c = 0; c < tsize; ++c) {
      const int pick = c + static_cast<int>(rng.next_below(pool.size() - static_cast<size_t>(c)));
      std::swap(pool[static_cast<size_t>(c)], pool[static_cast<size_t>(pick)]);
    }
    int best = 0;
    int tied = 1;
    for (int c = 1; c < tsize; ++c) {
      const double u = history.utility[static_cast<size_t>(pool[static_cast<size_t>(c)])];
      const double ub = history.utility[static_cast<size_t>(pool[static_cast<size_t>(best)])];
      if (u > ub) {
        best = c;
        tied = 1;
      } else if (u == ub) {
        ++tied;
        if (rng.next_below(static_cast<uint64_t>(tied)) == 0) best = c;
      }
    }
    out.push_back(pool[static_cast<size_t>(best)]);
    std::swap(pool[static_cast<size_t>(best)], pool.back());
    pool.pop_back();
  }
  return out;
}

// Called once per completed generation; refreshes utilities every
// update_interval generations from the current scalarized values.
inline void update_utilities(SpsHistory& history, const std::vector<double>& current_g) {
  if (current_g.size() != history.utility.size())
    throw std::invalid_argument("update_utilities: size mismatch");
  history.generation += 1;
  if (history.update_interval < 1 || history.generation % history.update_interval != 0) return;
  for (size_t i = 0; i < current_g.size(); ++i) {
    double delta = 0.0;
    if (history.snapshot_g[i] != 0.0)
      delta = (history.snapshot_g[i] - current_g[i]) / history.snapshot_g[i];
    if (delta < 0.0) delta = 0.0;
    if (delta > history.improvement_threshold) {
      history.utility[i] = 1.0;
    } else {
      history.utility[i] *=
          history.decay + (1.0 - history.decay) * delta / history.improvement_threshold;
    }
    history.snapshot_g[i] = current_g[i];
  }
}

}  // namespace moead
