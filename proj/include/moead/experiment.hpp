#pragma once

// Batch experiment driver: a config file describes a grid of
// (instance, mu, lambda, sps) cells, each replicated with derived seeds.
// Results land in an output directory as:
//
//   runs/<tag>.csv       per-run trace fragment (deterministic columns + wall)
//   archives/<tag>.csv   final archive, full-precision objectives + genotype
//   trace.csv            all fragments merged, deterministic columns only
//   timings.csv          wall-clock seconds per trace row
//
// A run's fragment + archive pair existing means the run is complete; rerun
// with the same config resumes by skipping those (fragments are written
// tmp-then-rename, so partial files never count). trace.csv is rebuilt from
// the fragments on every invocation and is byte-identical across reruns of
// the same config since wall time is quarantined in timings.csv.
//
// Seeds: run seed = mix_seed(mix_seed(master_seed, cell_index), replication)
// where cell_index counts the full grid enumeration (instances outermost,
// then mu, then sps, then lambda). Skipped cells (lambda > mu) keep their
// index so seeds are stable when a config is edited elsewhere.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "engine.hpp"
#include "landscape.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace moead {

struct ExperimentConfig {
  std::vector<NkSpec> instances;
  std::vector<int> mu_values;
  std::vector<int> lambda_values;  // used by rnd/dra cells; all forces lambda=mu
  std::vector<SpsStrategy> strategies;
  int replications = 0;
  uint64_t budget = 0;
  std::vector<uint64_t> checkpoints = default_checkpoints();
  uint64_t master_seed = 0;
  std::string output_dir;
  int workers = 1;
  WeightMethod weight_method = WeightMethod::Auto;
  double mutation_rate = -1.0;
  double t_fraction = 0.2;
  int dra_update_interval = 50;
  double dra_improvement_threshold = 1e-3;
  double dra_decay = 0.95;

  void validate() const {
    if (instances.empty()) throw std::invalid_argument("config: no instances");
    for (const auto& s : instances) s.validate();
    if (mu_values.empty()) throw std::invalid_argument("config: no mu values");
    for (int mu : mu_values)
      if (mu < 1) throw std::invalid_argument("config: mu must be >= 1");
    if (strategies.empty()) throw std::invalid_argument("config: no sps strategies");
    bool needs_lambda = false;
    for (SpsStrategy s : strategies)
      if (s != SpsStrategy::All) needs_lambda = true;
    if (needs_lambda && lambda_values.empty())
      throw std::invalid_argument("config: rnd/dra strategies require a lambda list");
    for (int l : lambda_values)
      if (l < 1) throw std::invalid_argument("config: lambda must be >= 1");
    if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (budget < 1) throw std::invalid_argument("config: budget must be >= 1");
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
  }
};

struct ExperimentCell {
  int index = 0;           // grid position; part of the seed derivation
  int instance_index = 0;  // into ExperimentConfig::instances
  int mu = 0;
  int lambda = 0;
  SpsStrategy sps = SpsStrategy::All;
  bool runnable = true;    // false iff lambda > mu
};

inline std::vector<ExperimentCell> enumerate_cells(const ExperimentConfig& cfg) {
  std::vector<ExperimentCell> cells;
  int index = 0;
  for (int inst = 0; inst < static_cast<int>(cfg.instances.size()); ++inst) {
    for (int mu : cfg.mu_values) {
      for (SpsStrategy sps : cfg.strategies) {
        const std::vector<int> lambdas =
            (sps == SpsStrategy::All) ? std::vector<int>{mu} : cfg.lambda_values;
        for (int lambda : lambdas) {
          ExperimentCell c;
          c.index = index++;
          c.instance_index = inst;
          c.mu = mu;
          c.lambda = lambda;
          c.sps = sps;
          c.runnable = lambda <= mu;
          cells.push_back(c);
        }
      }
    }
  }
  return cells;
}

inline uint64_t run_seed(uint64_t master_seed, int cell_index, int replication) {
  return mix_seed(mix_seed(master_seed, static_cast<uint64_t>(cell_index)),
                  static_cast<uint64_t>(replication));
}

inline std::string run_tag(int instance_index, const NkSpec& spec, int mu, int lambda,
                           SpsStrategy sps, int rep) {
  std::ostringstream ss;
  ss << 'i' << instance_index << "_n" << spec.n << 'm' << spec.m << 'k' << spec.k << 's'
     << spec.seed << "_mu" << mu << "_l" << lambda << '_' << sps_name(sps) << "_r" << rep;
  return ss.str();
}

namespace detail {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
    if (!os.flush()) throw std::runtime_error("write failure on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double_field(const std::string& s, const std::string& where) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline constexpr const char* kTraceHeader =
    "instance,N,M,K,instance_seed,mu,lambda,sps,rep,checkpoint,evaluations,archive_size,"
    "hv,g_min,g_mean";

// One merged-trace record; the experiment key columns plus the per-checkpoint
// engine measurements.
struct TraceRow {
  int instance = 0;
  NkSpec spec;
  int mu = 0;
  int lambda = 0;
  std::string sps;
  int rep = 0;
  uint64_t checkpoint = 0;
  uint64_t evaluations = 0;
  uint64_t archive_size = 0;
  double hv = 0.0;
  double g_min = 0.0;
  double g_mean = 0.0;
};

inline std::string trace_row_line(const TraceRow& r) {
  std::ostringstream ss;
  ss << r.instance << ',' << r.spec.n << ',' << r.spec.m << ',' << r.spec.k << ','
     << r.spec.seed << ',' << r.mu << ',' << r.lambda << ',' << r.sps << ',' << r.rep << ','
     << r.checkpoint << ',' << r.evaluations << ',' << r.archive_size << ','
     << detail::format_full(r.hv) << ',' << detail::format_full(r.g_min) << ','
     << detail::format_full(r.g_mean);
  return ss.str();
}

inline TraceRow parse_trace_row(const std::string& line, const std::string& where) {
  const std::vector<std::string> f = detail::split_csv(line);
  if (f.size() != 15) throw std::runtime_error(where + ": expected 15 columns");
  TraceRow r;
  try {
    r.instance = std::stoi(f[0]);
    r.spec.n = std::stoi(f[1]);
    r.spec.m = std::stoi(f[2]);
    r.spec.k = std::stoi(f[3]);
    r.spec.seed = std::stoull(f[4]);
    r.mu = std::stoi(f[5]);
    r.lambda = std::stoi(f[6]);
    r.sps = f[7];
    r.rep = std::stoi(f[8]);
    r.checkpoint = std::stoull(f[9]);
    r.evaluations = std::stoull(f[10]);
    r.archive_size = std::stoull(f[11]);
    r.hv = detail::parse_double_field(f[12], where);
    r.g_min = detail::parse_double_field(f[13], where);
    r.g_mean = detail::parse_double_field(f[14], where);
  } catch (const std::invalid_argument&) {
    throw std::runtime_error(where + ": malformed row");
  } catch (const std::out_of_range&) {
    throw std::runtime_error(where + ": value out of range");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Config file parsing. Line-oriented `key value...` records, '#' comments,
// schema-tagged first line. Unknown keys are hard errors with file:line.

namespace detail {

struct ConfigParser {
  std::string name;
  int lineno = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + msg);
  }

  int to_int(const std::string& s) const {
    try {
      size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) fail("bad integer '" + s + "'");
      return v;
    } catch (const std::exception&) {
      fail("bad integer '" + s + "'");
    }
  }

  uint64_t to_u64(const std::string& s) const {
    try {
      size_t used = 0;
      const uint64_t v = std::stoull(s, &used);
      if (used != s.size() || s.front() == '-') fail("bad unsigned integer '" + s + "'");
      return v;
    } catch (const std::exception&) {
      fail("bad unsigned integer '" + s + "'");
    }
  }

  double to_double(const std::string& s) const {
    const char* b = s.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0') fail("bad number '" + s + "'");
    return v;
  }
};

}  // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& is, const std::string& name) {
  ExperimentConfig cfg;
  detail::ConfigParser p{name};
  std::string line;
  bool saw_schema = false;
  bool saw_checkpoints = false;
  std::vector<std::string> seen_keys;
  while (std::getline(is, line)) {
    ++p.lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::vector<std::string> args;
    for (std::string tok; ss >> tok;) args.push_back(tok);
    if (!saw_schema) {
      if (key != "schema" || args.size() != 2 || args[0] != "moead-exp" || args[1] != "1")
        p.fail("first line must be 'schema moead-exp 1'");
      saw_schema = true;
      continue;
    }
    auto want = [&](size_t n) {
      if (args.size() != n)
        p.fail("key '" + key + "' expects " + std::to_string(n) + " value(s)");
    };
    auto want_some = [&]() {
      if (args.empty()) p.fail("key '" + key + "' expects at least one value");
    };
    if (key == "instance") {
      NkSpec spec;
      bool got_n = false, got_m = false, got_k = false, got_seed = false;
      for (const auto& tok : args) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) p.fail("instance fields must look like N=100");
        const std::string field = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (field == "N") {
          spec.n = p.to_int(value);
          got_n = true;
        } else if (field == "M") {
          spec.m = p.to_int(value);
          got_m = true;
        } else if (field == "K") {
          spec.k = p.to_int(value);
          got_k = true;
        } else if (field == "seed") {
          spec.seed = p.to_u64(value);
          got_seed = true;
        } else {
          p.fail("unknown instance field '" + field + "'");
        }
      }
      if (!(got_n && got_m && got_k && got_seed))
        p.fail("instance needs N=, M=, K=, seed=");
      try {
        spec.validate();
      } catch (const std::exception& e) {
        p.fail(e.what());
      }
      cfg.instances.push_back(spec);
      continue;
    }
    if (std::find(seen_keys.begin(), seen_keys.end(), key) != seen_keys.end())
      p.fail("duplicate key '" + key + "'");
    seen_keys.push_back(key);
    if (key == "mu") {
      want_some();
      for (const auto& a : args) cfg.mu_values.push_back(p.to_int(a));
    } else if (key == "lambda") {
      want_some();
      for (const auto& a : args) cfg.lambda_values.push_back(p.to_int(a));
    } else if (key == "sps") {
      want_some();
      for (const auto& a : args) {
        try {
          cfg.strategies.push_back(parse_sps(a));
        } catch (const std::exception& e) {
          p.fail(e.what());
        }
      }
    } else if (key == "replications") {
      want(1);
      cfg.replications = p.to_int(args[0]);
    } else if (key == "budget") {
      want(1);
      cfg.budget = p.to_u64(args[0]);
    } else if (key == "checkpoints") {
      want_some();
      cfg.checkpoints.clear();
      for (const auto& a : args) cfg.checkpoints.push_back(p.to_u64(a));
      saw_checkpoints = true;
    } else if (key == "master_seed") {
      want(1);
      cfg.master_seed = p.to_u64(args[0]);
    } else if (key == "output_dir") {
      want(1);
      cfg.output_dir = args[0];
    } else if (key == "workers") {
      want(1);
      cfg.workers = p.to_int(args[0]);
    } else if (key == "weights") {
      want(1);
      try {
        cfg.weight_method = parse_weight_method(args[0]);
      } catch (const std::exception& e) {
        p.fail(e.what());
      }
    } else if (key == "mutation_rate") {
      want(1);
      cfg.mutation_rate = p.to_double(args[0]);
    } else if (key == "t_fraction") {
      want(1);
      cfg.t_fraction = p.to_double(args[0]);
    } else if (key == "dra_interval") {
      want(1);
      cfg.dra_update_interval = p.to_int(args[0]);
    } else if (key == "dra_threshold") {
      want(1);
      cfg.dra_improvement_threshold = p.to_double(args[0]);
    } else if (key == "dra_decay") {
      want(1);
      cfg.dra_decay = p.to_double(args[0]);
    } else {
      p.fail("unknown key '" + key + "'");
    }
  }
  if (!saw_schema)
    throw std::runtime_error(name + ": empty config (missing 'schema moead-exp 1')");
  if (saw_checkpoints) {
    for (size_t i = 0; i < cfg.checkpoints.size(); ++i) {
      if (cfg.checkpoints[i] < 1 ||
          (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1]))
        throw std::runtime_error(name + ": checkpoints must be >= 1 and strictly increasing");
    }
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  return parse_experiment_config(is, path);
}

// ---------------------------------------------------------------------------
// Execution.

namespace detail {

inline std::string archive_csv(const SearchState& state) {
  const int m = state.instance->spec().m;
  std::ostringstream ss;
  for (int d = 0; d < m; ++d) ss << 'f' << d << ',';
  ss << "genotype\n";
  for (const auto& [genotype, f] : state.archive.points()) {
    for (int d = 0; d < m; ++d) ss << format_full(f[static_cast<size_t>(d)]) << ',';
    ss << genotype.to_hex() << '\n';
  }
  return ss.str();
}

inline constexpr const char* kFragmentHeader =
    "instance,N,M,K,instance_seed,mu,lambda,sps,rep,checkpoint,evaluations,archive_size,"
    "hv,g_min,g_mean,wall_seconds";

inline std::string fragment_csv(int instance_index, const NkSpec& spec,
                                const ExperimentCell& cell, int rep, const RunTrace& trace) {
  std::ostringstream ss;
  ss << kFragmentHeader << '\n';
  for (const auto& row : trace) {
    TraceRow tr;
    tr.instance = instance_index;
    tr.spec = spec;
    tr.mu = cell.mu;
    tr.lambda = cell.lambda;
    tr.sps = sps_name(cell.sps);
    tr.rep = rep;
    tr.checkpoint = row.checkpoint;
    tr.evaluations = row.evaluations;
    tr.archive_size = row.archive_size;
    tr.hv = row.hypervolume;
    tr.g_min = row.g_min;
    tr.g_mean = row.g_mean;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.6f", row.wall_seconds);
    ss << trace_row_line(tr) << ',' << wall << '\n';
  }
  return ss.str();
}

}  // namespace detail

// Executes every missing run of the grid, then rebuilds trace.csv and
// timings.csv from the complete fragment set. Progress and skip notices go
// to `log`. Returns the number of runs actually executed (0 = full resume).
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.output_dir.empty())
    throw std::invalid_argument("run_experiment: output_dir not set");
  namespace fs = std::filesystem;
  const fs::path out(cfg.output_dir);
  fs::create_directories(out / "runs");
  fs::create_directories(out / "archives");

  std::vector<NkInstance> instances;
  instances.reserve(cfg.instances.size());
  for (const auto& spec : cfg.instances) instances.push_back(generate_instance(spec));

  const std::vector<ExperimentCell> cells = enumerate_cells(cfg);
  struct Task {
    const ExperimentCell* cell;
    int rep;
    std::string tag;
  };
  std::vector<Task> todo;
  int complete = 0;
  for (const auto& cell : cells) {
    if (!cell.runnable) {
      log << "[skip] cell " << cell.index << " ("
          << run_tag(cell.instance_index, cfg.instances[static_cast<size_t>(cell.instance_index)],
                     cell.mu, cell.lambda, cell.sps, 0)
          << "...): lambda " << cell.lambda << " > mu " << cell.mu << "\n";
      continue;
    }
    for (int rep = 0; rep < cfg.replications; ++rep) {
      std::string tag =
          run_tag(cell.instance_index, cfg.instances[static_cast<size_t>(cell.instance_index)],
                  cell.mu, cell.lambda, cell.sps, rep);
      if (fs::exists(out / "runs" / (tag + ".csv")) &&
          fs::exists(out / "archives" / (tag + ".csv"))) {
        ++complete;
        continue;
      }
      todo.push_back(Task{&cell, rep, std::move(tag)});
    }
  }
  if (complete > 0)
    log << "[resume] " << complete << " run(s) already complete\n";

  std::atomic<size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= todo.size()) return;
      {
        std::lock_guard<std::mutex> lk(error_mutex);
        if (first_error) return;
      }
      const Task& task = todo[idx];
      try {
        const ExperimentCell& cell = *task.cell;
        RunConfig rc;
        rc.mu = cell.mu;
        rc.lambda = cell.lambda;
        rc.sps = cell.sps;
        rc.t_fraction = cfg.t_fraction;
        rc.budget = cfg.budget;
        rc.checkpoints = cfg.checkpoints;
        rc.seed = run_seed(cfg.master_seed, cell.index, task.rep);
        rc.mutation_rate = cfg.mutation_rate;
        rc.weight_method = cfg.weight_method;
        rc.dra_update_interval = cfg.dra_update_interval;
        rc.dra_improvement_threshold = cfg.dra_improvement_threshold;
        rc.dra_decay = cfg.dra_decay;
        const NkInstance& inst = instances[static_cast<size_t>(cell.instance_index)];
        SearchState state = run_search(inst, rc);
        detail::atomic_write(out / "archives" / (task.tag + ".csv"),
                             detail::archive_csv(state));
        detail::atomic_write(
            out / "runs" / (task.tag + ".csv"),
            detail::fragment_csv(cell.instance_index, inst.spec(), cell, task.rep, state.trace));
        {
          std::lock_guard<std::mutex> lk(log_mutex);
          log << "[run] " << task.tag << " evals=" << state.evaluations
              << " archive=" << state.archive.size()
              << " hv=" << state.trace.back().hypervolume << "\n";
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  int nworkers = cfg.workers;
  if (nworkers == 0) nworkers = static_cast<int>(std::thread::hardware_concurrency());
  nworkers = std::max(1, std::min<int>(nworkers, static_cast<int>(todo.size())));
  if (todo.size() <= 1 || nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(nworkers));
    for (int i = 0; i < nworkers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Merge fragments in grid order into the two top-level CSVs.
  std::ostringstream trace_out, timing_out;
  trace_out << kTraceHeader << '\n';
  timing_out << "instance,N,M,K,instance_seed,mu,lambda,sps,rep,checkpoint,wall_seconds\n";
  for (const auto& cell : cells) {
    if (!cell.runnable) continue;
    for (int rep = 0; rep < cfg.replications; ++rep) {
      const std::string tag =
          run_tag(cell.instance_index, cfg.instances[static_cast<size_t>(cell.instance_index)],
                  cell.mu, cell.lambda, cell.sps, rep);
      const fs::path frag = out / "runs" / (tag + ".csv");
      std::ifstream is(frag);
      if (!is) throw std::runtime_error("missing fragment " + frag.string());
      std::string line;
      if (!std::getline(is, line) || line != detail::kFragmentHeader)
        throw std::runtime_error("bad fragment header in " + frag.string());
      while (std::getline(is, line)) {
        if (line.empty()) continue;
        const size_t cut = line.rfind(',');
        if (cut == std::string::npos)
          throw std::runtime_error("malformed fragment row in " + frag.string());
        const std::string deterministic = line.substr(0, cut);
        const std::string wall = line.substr(cut + 1);
        trace_out << deterministic << '\n';
        const std::vector<std::string> f = detail::split_csv(deterministic);
        if (f.size() != 15)
          throw std::runtime_error("malformed fragment row in " + frag.string());
        for (size_t c = 0; c < 10; ++c) timing_out << f[c] << ',';
        timing_out << wall << '\n';
      }
    }
  }
  detail::atomic_write(out / "trace.csv", trace_out.str());
  detail::atomic_write(out / "timings.csv", timing_out.str());
  log << "[done] " << todo.size() << " run(s) executed, " << complete << " resumed; trace at "
      << (out / "trace.csv").string() << "\n";
  return static_cast<int>(todo.size());
}

// ---------------------------------------------------------------------------
// Reports. All reports read trace.csv (and the per-run archives for the
// reference fronts) back from the output directory, so they work across
// processes and resumed experiments.

inline std::vector<TraceRow> read_trace(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace file " + path);
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw std::runtime_error(path + ": bad or missing trace header");
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    rows.push_back(parse_trace_row(line, path + ":" + std::to_string(lineno)));
  }
  return rows;
}

// Objective vectors of one stored archive file.
inline Front read_archive_front(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("missing archive " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(path + ": empty archive");
  const std::vector<std::string> header = detail::split_csv(line);
  if (header.size() < 2 || header.back() != "genotype")
    throw std::runtime_error(path + ": bad archive header");
  const size_t m = header.size() - 1;
  Front front;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::split_csv(line);
    if (f.size() != m + 1)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad archive row");
    ObjectiveVector v(m);
    for (size_t d = 0; d < m; ++d)
      v[d] = detail::parse_double_field(f[d], path + ":" + std::to_string(lineno));
    front.push_back(std::move(v));
  }
  return front;
}

namespace detail {

struct RunKey {
  int instance;
  int mu;
  int lambda;
  std::string sps;
  int rep;
  auto operator<=>(const RunKey&) const = default;
};

// hv of the aggregated reference front per instance index, built from every
// run archive mentioned in the trace. Throws if any archive is missing.
inline std::map<int, double> reference_hv_by_instance(const std::string& output_dir,
                                                      const std::vector<TraceRow>& rows) {
  namespace fs = std::filesystem;
  std::map<RunKey, const TraceRow*> runs;
  for (const auto& r : rows)
    runs.emplace(RunKey{r.instance, r.mu, r.lambda, r.sps, r.rep}, &r);
  std::map<int, std::vector<Front>> fronts;
  for (const auto& [key, row] : runs) {
    const std::string tag =
        run_tag(key.instance, row->spec, key.mu, key.lambda, parse_sps(key.sps), key.rep);
    const fs::path p = fs::path(output_dir) / "archives" / (tag + ".csv");
    fronts[key.instance].push_back(read_archive_front(p.string()));
  }
  std::map<int, double> hv_ref;
  for (auto& [inst, fs_list] : fronts) {
    const Front ref = aggregate_reference(fs_list);
    hv_ref[inst] = hypervolume(ref, static_cast<int>(ref.front().size()));
  }
  return hv_ref;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace detail

enum class ReportMode { Convergence, Ranks, LambdaSweep };

inline ReportMode parse_report_mode(const std::string& s) {
  if (s == "convergence") return ReportMode::Convergence;
  if (s == "ranks") return ReportMode::Ranks;
  if (s == "lambda-sweep") return ReportMode::LambdaSweep;
  throw std::invalid_argument("unknown report mode '" + s + "'");
}

// Writes report_<mode>.csv into the output directory and returns its path.
// checkpoint_filter empty means every checkpoint present in the trace.
inline std::string write_report(const std::string& output_dir, ReportMode mode,
                                const std::vector<uint64_t>& checkpoint_filter, double alpha,
                                std::ostream& log) {
  namespace fs = std::filesystem;
  const std::vector<TraceRow> rows = read_trace((fs::path(output_dir) / "trace.csv").string());
  if (rows.empty()) throw std::runtime_error("trace.csv has no rows");
  const std::map<int, double> hv_ref = detail::reference_hv_by_instance(output_dir, rows);
  auto keep_checkpoint = [&](uint64_t cp) {
    return checkpoint_filter.empty() ||
           std::find(checkpoint_filter.begin(), checkpoint_filter.end(), cp) !=
               checkpoint_filter.end();
  };
  auto row_hvrd = [&](const TraceRow& r) {
    const double ref = hv_ref.at(r.instance);
    return (ref - r.hv) / ref;
  };

  std::ostringstream body;
  std::string filename;
  int out_rows = 0;
  if (mode == ReportMode::Convergence) {
    filename = "report_convergence.csv";
    body << "instance,N,M,K,instance_seed,mu,lambda,sps,checkpoint,runs,mean_hvrd,median_hvrd\n";
    std::map<std::tuple<int, int, int, std::string, uint64_t>,
             std::pair<const TraceRow*, std::vector<double>>>
        groups;
    for (const auto& r : rows) {
      if (!keep_checkpoint(r.checkpoint)) continue;
      auto& g = groups[{r.instance, r.mu, r.lambda, r.sps, r.checkpoint}];
      g.first = &r;
      g.second.push_back(row_hvrd(r));
    }
    for (const auto& [key, g] : groups) {
      const TraceRow& r = *g.first;
      body << r.instance << ',' << r.spec.n << ',' << r.spec.m << ',' << r.spec.k << ','
           << r.spec.seed << ',' << r.mu << ',' << r.lambda << ',' << r.sps << ','
           << std::get<4>(key) << ',' << g.second.size() << ','
           << detail::format_full(detail::mean_of(g.second)) << ','
           << detail::format_full(detail::median_of(g.second)) << '\n';
      ++out_rows;
    }
  } else if (mode == ReportMode::Ranks) {
    filename = "report_ranks.csv";
    body << "instance,N,M,K,instance_seed,checkpoint,mu,lambda,sps,rank,mean_hvrd,"
            "median_hvrd\n";
    // per (instance, checkpoint): one sample per strategy triple
    std::map<std::pair<int, uint64_t>,
             std::map<std::tuple<int, int, std::string>,
                      std::pair<const TraceRow*, std::vector<double>>>>
        tables;
    for (const auto& r : rows) {
      if (!keep_checkpoint(r.checkpoint)) continue;
      auto& g = tables[{r.instance, r.checkpoint}][{r.mu, r.lambda, r.sps}];
      g.first = &r;
      g.second.push_back(row_hvrd(r));
    }
    for (const auto& [key, strategies] : tables) {
      if (strategies.size() < 2)
        throw std::runtime_error(
            "ranks report needs at least 2 strategies per instance/checkpoint");
      std::vector<std::vector<double>> samples;
      samples.reserve(strategies.size());
      for (const auto& [skey, g] : strategies) samples.push_back(g.second);
      const std::vector<int> ranks = rank_table(samples, alpha);
      size_t idx = 0;
      for (const auto& [skey, g] : strategies) {
        const TraceRow& r = *g.first;
        body << r.instance << ',' << r.spec.n << ',' << r.spec.m << ',' << r.spec.k << ','
             << r.spec.seed << ',' << key.second << ',' << std::get<0>(skey) << ','
             << std::get<1>(skey) << ',' << std::get<2>(skey) << ',' << ranks[idx] << ','
             << detail::format_full(detail::mean_of(g.second)) << ','
             << detail::format_full(detail::median_of(g.second)) << '\n';
        ++idx;
        ++out_rows;
      }
    }
  } else {
    filename = "report_lambda_sweep.csv";
    body << "instance,N,M,K,instance_seed,sps,mu,checkpoint,lambda,runs,mean_hvrd,"
            "median_hvrd\n";
    std::map<std::tuple<int, std::string, int, uint64_t, int>,
             std::pair<const TraceRow*, std::vector<double>>>
        groups;
    for (const auto& r : rows) {
      if (!keep_checkpoint(r.checkpoint)) continue;
      auto& g = groups[{r.instance, r.sps, r.mu, r.checkpoint, r.lambda}];
      g.first = &r;
      g.second.push_back(row_hvrd(r));
    }
    for (const auto& [key, g] : groups) {
      const TraceRow& r = *g.first;
      body << r.instance << ',' << r.spec.n << ',' << r.spec.m << ',' << r.spec.k << ','
           << r.spec.seed << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
           << std::get<3>(key) << ',' << std::get<4>(key) << ',' << g.second.size() << ','
           << detail::format_full(detail::mean_of(g.second)) << ','
           << detail::format_full(detail::median_of(g.second)) << '\n';
      ++out_rows;
    }
  }
  const fs::path path = fs::path(output_dir) / filename;
  detail::atomic_write(path, body.str());
  log << "[report] wrote " << path.string() << " (" << out_rows << " rows)\n";
  return path.string();
}

}  // namespace moead
