// rps-attack: entropy sweeps, Monte Carlo verification runs and
// attack-vs-collective comparisons for the random postselection protocol.

#include "rps/commands.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Coherent replay attack on random-postselection DIQKD"};
  app.require_subcommand(1);

  rps::cli::SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Write the attack entropy curve as p,ent CSV");
  sweep_cmd->add_option("--p0", sweep.p0, "p(a=0|x=1)")->required();
  sweep_cmd->add_option("--p-min", sweep.p_min, "Smallest keep probability")->required();
  sweep_cmd->add_option("--p-max", sweep.p_max, "Largest keep probability")->required();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "Output CSV")->required();

  rps::cli::SimulateArgs sim;
  double p0 = 0.0;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run against the exact tables");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  sim_cmd->add_option("--pairs", sim.num_pairs, "Number of honest/replay key-round pairs")
      ->required();
  auto* p0_opt = sim_cmd->add_option(
      "--p0", p0, "Force Alice's key-round p(a=0); default is the Born value 0.5");
  sim_cmd->add_option("--p", sim.p, "Keep probability")->required();
  sim_cmd->add_option("--test-fraction", sim.test_round_fraction,
                      "Probability that a round is a test round")
      ->required();
  sim_cmd->add_option("--out", sim.out_path, "Report CSV")->required();

  rps::cli::CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Find where the attack beats an iid bound");
  cmp_cmd->add_option("--attack", cmp.attack_path, "Attack curve (p,ent)")->required();
  cmp_cmd->add_option("--iid", cmp.iid_path, "Collective-attack curve (p,ent)")->required();
  cmp_cmd->add_option("--out", cmp.out_path, "Report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep_cmd) {
      rps::cli::run_sweep(sweep);
    } else if (*sim_cmd) {
      if (*p0_opt) sim.p0 = p0;
      const auto report = rps::cli::run_simulate(sim);
      if (!report.all_passed()) {
        std::cerr << "rps-attack: simulation checks failed, see " << sim.out_path << '\n';
        return 2;
      }
    } else if (*cmp_cmd) {
      rps::cli::run_compare(cmp);
    }
  } catch (const std::exception& e) {
    std::cerr << "rps-attack: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
