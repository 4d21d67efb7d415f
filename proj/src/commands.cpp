#include "rps/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace rps::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("output path is empty");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace

std::vector<SweepPoint<double>> sweep_curve(const SweepArgs& args) {
  if (!(args.p_min >= 0.0 && args.p_max <= 1.0 && args.p_min < args.p_max)) {
    throw std::invalid_argument("sweep range must satisfy 0 <= p_min < p_max <= 1");
  }
  if (args.steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  const std::vector<double> grid = uniform_grid(args.p_min, args.p_max, args.steps);
  return sweep<double>(args.p0, grid);
}

std::vector<SweepPoint<double>> run_sweep(const SweepArgs& args) {
  const auto points = sweep_curve(args);
  auto out = open_output(args.out_path);
  write_curve_csv(out, to_curve(points));
  finish(out, args.out_path);
  return points;
}

RunReport simulate_report(const SimulateArgs& args) {
  SimulationConfig config;
  config.seed = args.seed;
  config.num_pairs = args.num_pairs;
  config.p0_override = args.p0;
  config.keep = KeepProbability(args.p);
  config.test_round_fraction = args.test_round_fraction;
  config.validate();
  return make_run_report(config, run_simulation(config));
}

RunReport run_simulate(const SimulateArgs& args) {
  if (args.out_path.empty()) throw std::invalid_argument("output path is empty");
  const RunReport report = simulate_report(args);
  auto out = open_output(args.out_path);
  write_run_report(out, report);
  finish(out, args.out_path);
  return report;
}

CompareResult compare_curves(const std::vector<CurvePoint>& attack, const IidCurve& iid) {
  const auto attack_sweep = to_sweep(attack);
  CompareResult r;
  r.intervals = crossover_region(attack_sweep, iid);
  r.max_gap = max_gap(attack_sweep, iid);
  r.common_p_min = std::max(attack.front().p, iid.points().front().p);
  r.common_p_max = std::min(attack.back().p, iid.points().back().p);
  return r;
}

void write_compare_report(std::ostream& out, const CompareResult& r) {
  out << std::setprecision(17);
  out << "common_range," << r.common_p_min << ',' << r.common_p_max << '\n';
  out << "intervals," << r.intervals.size() << '\n';
  for (const auto& iv : r.intervals) out << "interval," << iv.low << ',' << iv.high << '\n';
  out << "max_gap," << r.max_gap.gap << '\n';
  out << "max_gap_p," << r.max_gap.p << '\n';
}

CompareResult run_compare(const CompareArgs& args) {
  const std::vector<CurvePoint> attack = read_curve_csv(args.attack_path);
  const IidCurve iid(read_curve_csv(args.iid_path));
  const CompareResult result = compare_curves(attack, iid);
  auto out = open_output(args.out_path);
  write_compare_report(out, result);
  finish(out, args.out_path);
  return result;
}

}  // namespace rps::cli
