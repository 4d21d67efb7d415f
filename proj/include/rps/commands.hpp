#pragma once

// Batch commands behind the rps-attack executable.

#include "rps/crossover.hpp"
#include "rps/montecarlo.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rps::cli {

struct SweepArgs {
  double p0 = 0.5;
  double p_min = 0.0;
  double p_max = 1.0;
  int steps = 201;
  std::string out_path;
};

struct SimulateArgs {
  std::uint64_t seed = 1;
  std::uint64_t num_pairs = 1000000;
  /// Unset means Alice's Born marginal for the Bell pair.
  std::optional<double> p0;
  double p = 0.5;
  double test_round_fraction = 0.5;
  std::string out_path;
};

struct CompareArgs {
  std::string attack_path;
  std::string iid_path;
  std::string out_path;
};

struct CompareResult {
  std::vector<PInterval> intervals;
  GapExtremum max_gap;
  double common_p_min;
  double common_p_max;
};

std::vector<SweepPoint<double>> sweep_curve(const SweepArgs& args);
std::vector<SweepPoint<double>> run_sweep(const SweepArgs& args);

RunReport simulate_report(const SimulateArgs& args);
RunReport run_simulate(const SimulateArgs& args);

CompareResult compare_curves(const std::vector<CurvePoint>& attack, const IidCurve& iid);
void write_compare_report(std::ostream& out, const CompareResult& result);
CompareResult run_compare(const CompareArgs& args);

}  // namespace rps::cli
