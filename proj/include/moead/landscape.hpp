#pragma once

// Multi-objective NK landscapes: M independent random NK functions over the
// same N-bit genotype space, each bit epistatically linked to K others.
//
// Contribution table layout: for objective m and bit i the table holds
// 2^(K+1) values indexed by packing the relevant bits MSB-first, own bit
// first, then the linked bits in stored (ascending) order:
//
//   idx = x_i * 2^K + sum_k x_{links[k]} * 2^(K-1-k)
//
// f_m(x) = (1/N) * sum_i table[m][i][idx_i(x)], accumulated in ascending bit
// order so results are bit-for-bit reproducible.
//
// Generation is seed-deterministic and order-independent: every (m, i) pair
// gets its own child RNG stream (key m*N + i) which first draws the K links
// (uniform without replacement from [0..N-1] \ {i}, then sorted) and then the
// 2^(K+1) table entries in index order.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genotype.hpp"
#include "objective.hpp"
#include "rng.hpp"

namespace moead {

struct NkSpec {
  int n = 0;
  int m = 0;
  int k = 0;
  uint64_t seed = 0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("NkSpec: N must be >= 1");
    if (m < 1) throw std::invalid_argument("NkSpec: M must be >= 1");
    if (k < 0 || k > n - 1) throw std::invalid_argument("NkSpec: K must be in [0, N-1]");
    if (k > 20) throw std::invalid_argument("NkSpec: K > 20 would need >2M table entries per bit");
  }

  bool operator==(const NkSpec&) const = default;
};

class NkInstance {
 public:
  NkInstance(NkSpec spec, std::vector<int> links, std::vector<double> tables)
      : spec_(spec),
        table_size_(1 << (spec.k + 1)),
        links_(std::move(links)),
        tables_(std::move(tables)) {
    spec_.validate();
    const size_t pairs = static_cast<size_t>(spec_.m) * static_cast<size_t>(spec_.n);
    if (links_.size() != pairs * static_cast<size_t>(spec_.k))
      throw std::invalid_argument("NkInstance: bad links size");
    if (tables_.size() != pairs * static_cast<size_t>(table_size_))
      throw std::invalid_argument("NkInstance: bad tables size");
    for (size_t p = 0; p < pairs; ++p) {
      const int i = static_cast<int>(p % static_cast<size_t>(spec_.n));
      const int* l = links_.data() + p * static_cast<size_t>(spec_.k);
      for (int j = 0; j < spec_.k; ++j) {
        if (l[j] < 0 || l[j] >= spec_.n || l[j] == i)
          throw std::invalid_argument("NkInstance: link out of range or self-link");
        if (j > 0 && l[j] <= l[j - 1])
          throw std::invalid_argument("NkInstance: links must be sorted and distinct");
      }
    }
    for (double v : tables_)
      if (!(v >= 0.0 && v < 1.0))
        throw std::invalid_argument("NkInstance: table entry outside [0,1)");
  }

  const NkSpec& spec() const { return spec_; }
  int table_size() const { return table_size_; }

  const int* links(int m, int i) const {
    return links_.data() + pair_index(m, i) * static_cast<size_t>(spec_.k);
  }

  const double* table(int m, int i) const {
    return tables_.data() + pair_index(m, i) * static_cast<size_t>(table_size_);
  }

  void evaluate_into(const Genotype& x, double* out) const {
    if (x.size() != spec_.n)
      throw std::invalid_argument("NkInstance::evaluate: genotype length mismatch");
    const int n = spec_.n;
    const int k = spec_.k;
    for (int m = 0; m < spec_.m; ++m) {
      double acc = 0.0;
      const int* l = links_.data() + static_cast<size_t>(m) * n * k;
      const double* t = tables_.data() + static_cast<size_t>(m) * n * table_size_;
      for (int i = 0; i < n; ++i) {
        unsigned idx = x.get(i) ? 1u : 0u;
        for (int j = 0; j < k; ++j) idx = (idx << 1) | (x.get(l[j]) ? 1u : 0u);
        acc += t[static_cast<size_t>(i) * table_size_ + idx];
        l += k;
      }
      out[m] = acc / n;
    }
  }

  ObjectiveVector evaluate(const Genotype& x) const {
    ObjectiveVector f(static_cast<size_t>(spec_.m));
    evaluate_into(x, f.data());
    return f;
  }

  bool operator==(const NkInstance&) const = default;

 private:
  size_t pair_index(int m, int i) const {
    return static_cast<size_t>(m) * static_cast<size_t>(spec_.n) + static_cast<size_t>(i);
  }

  NkSpec spec_;
  int table_size_;
  std::vector<int> links_;    // (m*N + i)*K + j, ascending within each pair
  std::vector<double> tables_;  // (m*N + i)*2^(K+1) + idx
};

inline NkInstance generate_instance(const NkSpec& spec) {
  spec.validate();
  const Rng root(spec.seed);
  const int n = spec.n, m = spec.m, k = spec.k;
  const int tsize = 1 << (k + 1);
  std::vector<int> links(static_cast<size_t>(m) * n * k);
  std::vector<double> tables(static_cast<size_t>(m) * n * tsize);
  std::vector<int> candidates(static_cast<size_t>(n > 0 ? n - 1 : 0));
  for (int obj = 0; obj < m; ++obj) {
    for (int i = 0; i < n; ++i) {
      Rng stream = root.child(static_cast<uint64_t>(obj) * n + i);
      // Partial Fisher-Yates over the N-1 other bit positions.
      int c = 0;
      for (int v = 0; v < n; ++v)
        if (v != i) candidates[static_cast<size_t>(c++)] = v;
      int* l = links.data() + (static_cast<size_t>(obj) * n + i) * k;
      for (int j = 0; j < k; ++j) {
        const auto pick = j + static_cast<int>(stream.next_below(static_cast<uint64_t>(n - 1 - j)));
        std::swap(candidates[static_cast<size_t>(j)], candidates[static_cast<size_t>(pick)]);
        l[j] = candidates[static_cast<size_t>(j)];
      }
      std::sort(l, l + k);
      double* t = tables.data() + (static_cast<size_t>(obj) * n + i) * tsize;
      for (int idx = 0; idx < tsize; ++idx) t[idx] = stream.next_double();
    }
  }
  return NkInstance(spec, std::move(links), std::move(tables));
}

// Text serialization, version-tagged. Doubles are written as C99 hex floats
// so a round trip preserves exact bit patterns.
inline void save_instance(const NkInstance& inst, std::ostream& os) {
  const NkSpec& s = inst.spec();
  os << "moead-nk 1\n";
  os << "n " << s.n << "\nm " << s.m << "\nk " << s.k << "\nseed " << s.seed << "\n";
  char buf[64];
  for (int m = 0; m < s.m; ++m) {
    for (int i = 0; i < s.n; ++i) {
      os << "links " << m << ' ' << i;
      const int* l = inst.links(m, i);
      for (int j = 0; j < s.k; ++j) os << ' ' << l[j];
      os << "\ntable " << m << ' ' << i;
      const double* t = inst.table(m, i);
      for (int idx = 0; idx < inst.table_size(); ++idx) {
        std::snprintf(buf, sizeof buf, "%a", t[idx]);
        os << ' ' << buf;
      }
      os << '\n';
    }
  }
  os << "end\n";
  if (!os) throw std::runtime_error("save_instance: write failure");
}

namespace detail {

inline std::string next_instance_line(std::istream& is, int& lineno) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("load_instance: truncated stream");
  ++lineno;
  return line;
}

inline double parse_hexfloat(const std::string& tok, int lineno) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error("load_instance: bad float at line " + std::to_string(lineno));
  return v;
}

}  // namespace detail

inline NkInstance load_instance(std::istream& is) {
  int lineno = 0;
  std::string line = detail::next_instance_line(is, lineno);
  if (line != "moead-nk 1")
    throw std::runtime_error("load_instance: unsupported format header '" + line + "'");

  NkSpec spec;
  auto read_kv = [&](const char* key) -> std::string {
    const std::string l = detail::next_instance_line(is, lineno);
    std::istringstream ss(l);
    std::string k, v;
    if (!(ss >> k >> v) || k != key)
      throw std::runtime_error(std::string("load_instance: expected '") + key +
                               "' at line " + std::to_string(lineno));
    return v;
  };
  spec.n = std::stoi(read_kv("n"));
  spec.m = std::stoi(read_kv("m"));
  spec.k = std::stoi(read_kv("k"));
  spec.seed = std::stoull(read_kv("seed"));
  spec.validate();

  const int tsize = 1 << (spec.k + 1);
  std::vector<int> links(static_cast<size_t>(spec.m) * spec.n * spec.k);
  std::vector<double> tables(static_cast<size_t>(spec.m) * spec.n * tsize);
  for (int m = 0; m < spec.m; ++m) {
    for (int i = 0; i < spec.n; ++i) {
      std::istringstream ls(detail::next_instance_line(is, lineno));
      std::string tag;
      int lm, li;
      if (!(ls >> tag >> lm >> li) || tag != "links" || lm != m || li != i)
        throw std::runtime_error("load_instance: expected links " + std::to_string(m) + " " +
                                 std::to_string(i) + " at line " + std::to_string(lineno));
      int* l = links.data() + (static_cast<size_t>(m) * spec.n + i) * spec.k;
      for (int j = 0; j < spec.k; ++j)
        if (!(ls >> l[j]))
          throw std::runtime_error("load_instance: short links line " + std::to_string(lineno));

      std::istringstream ts(detail::next_instance_line(is, lineno));
      if (!(ts >> tag >> lm >> li) || tag != "table" || lm != m || li != i)
        throw std::runtime_error("load_instance: expected table " + std::to_string(m) + " " +
                                 std::to_string(i) + " at line " + std::to_string(lineno));
      double* t = tables.data() + (static_cast<size_t>(m) * spec.n + i) * tsize;
      for (int idx = 0; idx < tsize; ++idx) {
        std::string tok;
        if (!(ts >> tok))
          throw std::runtime_error("load_instance: short table line " + std::to_string(lineno));
        t[idx] = detail::parse_hexfloat(tok, lineno);
      }
    }
  }
  if (detail::next_instance_line(is, lineno) != "end")
    throw std::runtime_error("load_instance: missing end marker");
  return NkInstance(spec, std::move(links), std::move(tables));
}

}  // namespace moead
