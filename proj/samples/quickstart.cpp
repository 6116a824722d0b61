// Minimal end-to-end use of the library: build a landscape, run the engine
// with each selection strategy, and print the anytime hypervolume trace.

#include <cstdio>

#include "moead/moead.hpp"

int main() {
  const moead::NkSpec spec{/*n=*/64, /*m=*/2, /*k=*/2, /*seed=*/7};
  const moead::NkInstance instance = moead::generate_instance(spec);

  for (const moead::SpsStrategy sps :
       {moead::SpsStrategy::All, moead::SpsStrategy::Rnd, moead::SpsStrategy::Dra}) {
    moead::RunConfig config;
    config.mu = 50;
    config.lambda = (sps == moead::SpsStrategy::All) ? 50 : 10;
    config.sps = sps;
    config.budget = 20000;
    config.checkpoints = {100, 1000, 10000, 20000};
    config.seed = 42;

    const moead::SearchState state = moead::run_search(instance, config);
    std::printf("sps=%s final archive=%zu\n", moead::sps_name(sps), state.archive.size());
    for (const auto& row : state.trace)
      std::printf("  evals %8llu  hv %.6f  g_mean %.6f\n",
                  static_cast<unsigned long long>(row.evaluations), row.hypervolume,
                  row.g_mean);
  }
  return 0;
}
