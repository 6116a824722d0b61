#pragma once

// Objective vectors are plain double vectors; all objectives are maximized
// and benchmark values live in [0, 1). Equality is exact bitwise equality of
// components, matching the archive's duplicate rule.

#include <cstdint>
#include <cstring>
#include <vector>

namespace moead {

using ObjectiveVector = std::vector<double>;

struct ObjectiveVectorHash {
  size_t operator()(const ObjectiveVector& v) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (double x : v) {
      uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      h ^= bits;
      h *= 0x100000001b3ULL;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace moead
