#pragma once

// The (mu, lambda, sps) decomposition engine: mu Chebyshev sub-problems,
// lambda offspring per generation produced for the sub-problems picked by
// the selection strategy, neighborhood-based mating and replacement, an
// unbounded external archive, and anytime trace rows at evaluation-count
// checkpoints.
//
// Per-generation order for each selected sub-problem i: mate, cross, mutate,
// evaluate (counter++), archive update, reference-point update, neighborhood
// replacement, checkpoint flush. The run stops mid-generation the moment the
// evaluation budget is exhausted, after completing the bookkeeping of the
// offspring that consumed the final evaluation. DRA utilities refresh once
// per fully completed generation.
//
// Determinism: a run is a pure function of (instance, config). All
// randomness comes from one xoshiro stream seeded with config.seed, with a
// fixed draw discipline (selection draws, then per offspring: 1 mating draw,
// 2 crossover draws, N mutation draws). Trace rows carry wall-clock seconds
// for reporting, but no algorithmic decision depends on time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "genotype.hpp"
#include "landscape.hpp"
#include "metrics.hpp"
#include "objective.hpp"
#include "rng.hpp"
#include "scalarize.hpp"
#include "sps.hpp"
#include "variation.hpp"

namespace moead {

enum class SpsStrategy { All, Rnd, Dra };

inline SpsStrategy parse_sps(const std::string& s) {
  if (s == "all") return SpsStrategy::All;
  if (s == "rnd") return SpsStrategy::Rnd;
  if (s == "dra") return SpsStrategy::Dra;
  throw std::invalid_argument("unknown sps strategy '" + s + "'");
}

inline const char* sps_name(SpsStrategy s) {
  switch (s) {
    case SpsStrategy::All: return "all";
    case SpsStrategy::Rnd: return "rnd";
    case SpsStrategy::Dra: return "dra";
  }
  return "?";
}

inline std::vector<uint64_t> default_checkpoints() {
  return {1, 10, 100, 1000, 10000, 100000, 1000000, 10000000};
}

struct RunConfig {
  int mu = 0;
  int lambda = 0;
  SpsStrategy sps = SpsStrategy::All;
  double t_fraction = 0.2;           // T = max(1, round(t_fraction * mu))
  uint64_t budget = 0;               // total evaluations, initialization included
  std::vector<uint64_t> checkpoints = default_checkpoints();
  uint64_t seed = 0;
  double mutation_rate = -1.0;       // < 0 resolves to 1/N
  WeightMethod weight_method = WeightMethod::Auto;
  int dra_update_interval = 50;
  double dra_improvement_threshold = 1e-3;
  double dra_decay = 0.95;

  void validate() const {
    if (mu < 1) throw std::invalid_argument("RunConfig: mu must be >= 1");
    if (lambda < 1 || lambda > mu)
      throw std::invalid_argument("RunConfig: lambda must be in [1, mu]");
    if (sps == SpsStrategy::All && lambda != mu)
      throw std::invalid_argument("RunConfig: sps=all requires lambda == mu");
    if (!(t_fraction > 0.0 && t_fraction <= 1.0))
      throw std::invalid_argument("RunConfig: t_fraction must be in (0, 1]");
    if (budget < static_cast<uint64_t>(mu))
      throw std::invalid_argument("RunConfig: budget below initialization cost mu");
    if (checkpoints.empty()) throw std::invalid_argument("RunConfig: no checkpoints");
    for (size_t i = 0; i < checkpoints.size(); ++i) {
      if (checkpoints[i] < 1)
        throw std::invalid_argument("RunConfig: checkpoints must be >= 1");
      if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
        throw std::invalid_argument("RunConfig: checkpoints must be strictly increasing");
    }
    if (mutation_rate >= 0.0 && mutation_rate > 1.0)
      throw std::invalid_argument("RunConfig: mutation rate must be in [0, 1]");
    if (dra_update_interval < 1)
      throw std::invalid_argument("RunConfig: dra update interval must be >= 1");
    if (!(dra_improvement_threshold > 0.0))
      throw std::invalid_argument("RunConfig: dra threshold must be positive");
    if (!(dra_decay > 0.0 && dra_decay <= 1.0))
      throw std::invalid_argument("RunConfig: dra decay must be in (0, 1]");
  }

  int neighborhood_size() const {
    const auto t = static_cast<int>(std::lround(t_fraction * mu));
    return std::min(mu, std::max(1, t));
  }
};

struct RunTraceRow {
  uint64_t checkpoint = 0;
  uint64_t evaluations = 0;   // counter when the row was recorded (>= checkpoint)
  uint64_t archive_size = 0;
  double hypervolume = 0.0;
  double g_min = 0.0;         // over the mu incumbents' scalarized values
  double g_mean = 0.0;
  double wall_seconds = 0.0;
};

using RunTrace = std::vector<RunTraceRow>;

// Unbounded store of mutually non-dominated (genotype, objectives) pairs
// with exact-duplicate objective vectors rejected in O(1).
class Archive {
 public:
  // Returns true iff the candidate entered the archive (dominated members
  // are evicted). Membership order is deterministic but unspecified.
  bool update(const Genotype& x, const ObjectiveVector& f) {
    if (seen_.count(f)) return false;
    for (auto it = points_.rbegin(); it != points_.rend(); ++it)
      if (dominates(it->second, f)) return false;
    for (size_t i = points_.size(); i-- > 0;) {
      if (dominates(f, points_[i].second)) {
        seen_.erase(points_[i].second);
        points_[i] = std::move(points_.back());
        points_.pop_back();
      }
    }
    points_.emplace_back(x, f);
    seen_.insert(f);
    return true;
  }

  size_t size() const { return points_.size(); }
  const std::vector<std::pair<Genotype, ObjectiveVector>>& points() const { return points_; }

  Front objectives() const {
    Front out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.second);
    return out;
  }

 private:
  std::vector<std::pair<Genotype, ObjectiveVector>> points_;
  std::unordered_set<ObjectiveVector, ObjectiveVectorHash> seen_;
};

struct SearchState;

struct RunHooks {
  // After a trace row is recorded (initialization rows included).
  std::function<void(const SearchState&, const RunTraceRow&)> on_checkpoint;
  // Before incumbent k is overwritten; state still holds the old incumbent.
  std::function<void(const SearchState&, int k, const ObjectiveVector& old_f,
                     const ObjectiveVector& new_f)>
      on_replacement;
};

struct SearchState {
  const NkInstance* instance = nullptr;
  RunConfig config;
  WeightSet weights;
  NeighborhoodTable neighborhoods;
  std::vector<double> zstar;
  std::vector<Genotype> population;      // incumbent per sub-problem
  std::vector<ObjectiveVector> objectives;
  Archive archive;
  SpsHistory history;
  Rng rng{0};
  uint64_t evaluations = 0;
  uint64_t generation = 0;
  double mutation_rate = 0.0;
  RunTrace trace;
  size_t next_checkpoint = 0;
  std::chrono::steady_clock::time_point started;
};

namespace detail {

inline std::vector<double> incumbent_g(const SearchState& s) {
  std::vector<double> g(s.population.size());
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = chebyshev(s.objectives[i], s.weights.vectors[i], s.zstar);
  return g;
}

inline void flush_checkpoints(SearchState& s, const RunHooks* hooks) {
  const auto& cps = s.config.checkpoints;
  while (s.next_checkpoint < cps.size() && cps[s.next_checkpoint] <= s.evaluations) {
    RunTraceRow row;
    row.checkpoint = cps[s.next_checkpoint];
    row.evaluations = s.evaluations;
    row.archive_size = s.archive.size();
    row.hypervolume = hypervolume(s.archive.objectives(), s.instance->spec().m);
    const std::vector<double> g = incumbent_g(s);
    row.g_min = *std::min_element(g.begin(), g.end());
    double sum = 0.0;
    for (double v : g) sum += v;
    row.g_mean = sum / static_cast<double>(g.size());
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - s.started).count();
    s.trace.push_back(row);
    if (hooks && hooks->on_checkpoint) hooks->on_checkpoint(s, row);
    ++s.next_checkpoint;
  }
}

}  // namespace detail

// Offspring (x, f) competes for every sub-problem in B_i under the current
// reference point; strictly better scalarized value replaces the incumbent.
inline void replace(SearchState& s, int i, const Genotype& x, const ObjectiveVector& f,
                    const RunHooks* hooks = nullptr) {
  for (const int k : s.neighborhoods.neighbors[static_cast<size_t>(i)]) {
    const auto& wk = s.weights.vectors[static_cast<size_t>(k)];
    const double g_new = chebyshev(f, wk, s.zstar);
    const double g_old = chebyshev(s.objectives[static_cast<size_t>(k)], wk, s.zstar);
    if (g_new < g_old) {
      if (hooks && hooks->on_replacement)
        hooks->on_replacement(s, k, s.objectives[static_cast<size_t>(k)], f);
      s.population[static_cast<size_t>(k)] = x;
      s.objectives[static_cast<size_t>(k)] = f;
    }
  }
}

inline SearchState initialize(const NkInstance& instance, const RunConfig& config,
                              const RunHooks* hooks = nullptr) {
  config.validate();
  SearchState s;
  s.instance = &instance;
  s.config = config;
  s.started = std::chrono::steady_clock::now();
  s.rng = Rng(config.seed);
  s.mutation_rate =
      config.mutation_rate < 0.0 ? 1.0 / instance.spec().n : config.mutation_rate;
  s.weights = generate_weights(config.mu, instance.spec().m, config.weight_method);
  s.neighborhoods = build_neighborhoods(s.weights, config.neighborhood_size());
  s.population.reserve(static_cast<size_t>(config.mu));
  s.objectives.reserve(static_cast<size_t>(config.mu));
  for (int i = 0; i < config.mu; ++i) {
    s.population.push_back(random_genotype(instance.spec().n, s.rng));
    s.objectives.push_back(instance.evaluate(s.population.back()));
    s.evaluations += 1;
  }
  s.zstar = init_reference(s.objectives);
  for (int i = 0; i < config.mu; ++i)
    s.archive.update(s.population[static_cast<size_t>(i)], s.objectives[static_cast<size_t>(i)]);
  s.history = make_history(detail::incumbent_g(s));
  s.history.update_interval = config.dra_update_interval;
  s.history.improvement_threshold = config.dra_improvement_threshold;
  s.history.decay = config.dra_decay;
  detail::flush_checkpoints(s, hooks);
  return s;
}

// Runs one generation (possibly truncated by the budget). Returns false once
// the budget is exhausted.
inline bool step_generation(SearchState& s, const RunHooks* hooks = nullptr) {
  if (s.evaluations >= s.config.budget) return false;
  std::vector<int> selected;
  switch (s.config.sps) {
    case SpsStrategy::All:
      selected = select_all(s.config.mu);
      break;
    case SpsStrategy::Rnd:
      selected = select_rnd(s.config.mu, s.config.lambda, s.weights.boundary, s.generation, s.rng);
      break;
    case SpsStrategy::Dra:
      selected = select_dra(s.history, s.config.mu, s.config.lambda, s.weights.boundary,
                            s.generation, s.rng);
      break;
  }
  bool completed = true;
  for (const int i : selected) {
    if (s.evaluations >= s.config.budget) {
      completed = false;
      break;
    }
    MatingPair parents =
        mating_select(i, s.neighborhoods.neighbors[static_cast<size_t>(i)], s.population, s.rng);
    Genotype child = two_point_crossover(parents.first, parents.second, s.rng);
    child = bit_flip_mutation(child, s.mutation_rate, s.rng);
    const ObjectiveVector f = s.instance->evaluate(child);
    s.evaluations += 1;
    s.archive.update(child, f);
    update_reference(s.zstar, f);
    replace(s, i, child, f, hooks);
    detail::flush_checkpoints(s, hooks);
  }
  if (completed && s.config.sps == SpsStrategy::Dra)
    update_utilities(s.history, detail::incumbent_g(s));
  s.generation += 1;
  return s.evaluations < s.config.budget;
}

inline SearchState run_search(const NkInstance& instance, const RunConfig& config,
                              const RunHooks* hooks = nullptr) {
  SearchState s = initialize(instance, config, hooks);
  while (step_generation(s, hooks)) {
  }
  return s;
}

inline RunTrace run(const NkInstance& instance, const RunConfig& config,
                    const RunHooks* hooks = nullptr) {
  return run_search(instance, config, hooks).trace;
}

}  // namespace moead
