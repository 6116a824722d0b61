#pragma once

// Umbrella header: decomposition-based evolutionary multi-objective
// optimization on multi-objective NK landscapes, plus the experiment and
// reporting toolkit built around it.

#include "engine.hpp"      // IWYU pragma: export
#include "experiment.hpp"  // IWYU pragma: export
#include "genotype.hpp"    // IWYU pragma: export
#include "landscape.hpp"   // IWYU pragma: export
#include "metrics.hpp"     // IWYU pragma: export
#include "objective.hpp"   // IWYU pragma: export
#include "rng.hpp"         // IWYU pragma: export
#include "scalarize.hpp"   // IWYU pragma: export
#include "sps.hpp"         // IWYU pragma: export
#include "variation.hpp"   // IWYU pragma: export
