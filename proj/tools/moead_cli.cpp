// Command-line front end: generate benchmark instances, execute experiment
// grids, and summarize results.
//
//   moead gen-instance -N 100 -M 2 -K 0 --seed 7 -o instance.nk
//   moead run --config exp.cfg [--output-dir DIR] [--workers N] [--checkpoints ...]
//   moead report --output-dir DIR --mode convergence|ranks|lambda-sweep
//                [--checkpoints ...] [--alpha 0.05]
//
// Exit status 0 on success, 1 on any error (message on stderr).

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moead/moead.hpp"

namespace {

int cmd_gen_instance(int n, int m, int k, uint64_t seed, const std::string& output) {
  moead::NkSpec spec{n, m, k, seed};
  spec.validate();
  const moead::NkInstance instance = moead::generate_instance(spec);
  std::ofstream os(output, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open output file " + output);
  moead::save_instance(instance, os);
  std::cout << "wrote " << output << " (N=" << n << " M=" << m << " K=" << k
            << " seed=" << seed << ")\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& output_dir, int workers,
            const std::vector<uint64_t>& checkpoints) {
  moead::ExperimentConfig cfg = moead::load_experiment_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (cfg.output_dir.empty())
    throw std::runtime_error("no output directory (set output_dir in the config or pass "
                             "--output-dir)");
  if (workers >= 0) cfg.workers = workers;
  if (!checkpoints.empty()) {
    for (size_t i = 0; i < checkpoints.size(); ++i)
      if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
        throw std::runtime_error("--checkpoints must be >= 1 and strictly increasing");
    cfg.checkpoints = checkpoints;
  }
  moead::run_experiment(cfg, std::cout);
  return 0;
}

int cmd_report(const std::string& output_dir, const std::string& mode_name,
               const std::vector<uint64_t>& checkpoints, double alpha) {
  const moead::ReportMode mode = moead::parse_report_mode(mode_name);
  moead::write_report(output_dir, mode, checkpoints, alpha, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decomposition-based multi-objective optimization toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-instance", "generate an NK landscape instance file");
  int n = 0, m = 0, k = 0;
  uint64_t seed = 0;
  std::string output;
  gen->add_option("-N,--length", n, "bit-string length")->required();
  gen->add_option("-M,--objectives", m, "number of objectives")->required();
  gen->add_option("-K,--links", k, "epistatic links per bit")->required();
  gen->add_option("--seed", seed, "generation seed")->required();
  gen->add_option("-o,--output", output, "output file")->required();

  auto* run = app.add_subcommand("run", "execute an experiment grid (resumable)");
  std::string config_path, output_dir;
  int workers = -1;
  std::vector<uint64_t> checkpoints;
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--output-dir", output_dir, "override the config's output directory");
  run->add_option("--workers", workers, "worker threads (0 = all hardware threads)");
  run->add_option("--checkpoints", checkpoints, "override the checkpoint list");

  auto* rep = app.add_subcommand("report", "summarize a finished experiment");
  std::string report_dir, mode = "convergence";
  std::vector<uint64_t> report_checkpoints;
  double alpha = 0.05;
  rep->add_option("--output-dir", report_dir, "experiment output directory")->required();
  rep->add_option("--mode", mode, "convergence | ranks | lambda-sweep");
  rep->add_option("--checkpoints", report_checkpoints,
                  "restrict to these checkpoints (default: all present)");
  rep->add_option("--alpha", alpha, "significance level for ranks mode");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_instance(n, m, k, seed, output);
    if (run->parsed()) return cmd_run(config_path, output_dir, workers, checkpoints);
    if (rep->parsed()) return cmd_report(report_dir, mode, report_checkpoints, alpha);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
