#include "rps/montecarlo.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rps {

void SimulationConfig::validate() const {
  if (num_pairs < 1) throw std::invalid_argument("num_pairs must be at least 1");
  if (!(test_round_fraction >= 0.0 && test_round_fraction < 1.0)) {
    throw std::invalid_argument("test_round_fraction must lie in [0,1)");
  }
  if (p0_override && !(*p0_override >= 0.0 && *p0_override <= 1.0)) {
    throw std::invalid_argument("p0 override must lie in [0,1]");
  }
}

PairMatrix<double> EmpiricalPairDistribution::frequencies() const {
  if (total == 0) throw std::invalid_argument("empirical distribution is empty");
  return counts.cast<double>() / static_cast<double>(total);
}

std::uint64_t TestRoundCounts::rounds(int x, int y) const {
  std::uint64_t n = 0;
  for (Bit a = 0; a < 2; ++a) {
    for (Bit b = 0; b < 2; ++b) n += count(x, y, a, b);
  }
  return n;
}

std::uint64_t TestRoundCounts::total() const {
  std::uint64_t n = 0;
  for (const auto c : counts_) n += c;
  return n;
}

CorrelationTable<double> TestRoundCounts::to_table() const {
  CorrelationTable<double> table;
  for (int x : {1, 2}) {
    for (int y : {1, 2}) {
      const std::uint64_t n = rounds(x, y);
      if (n == 0) continue;
      OutcomeTable<double> probs;
      for (Bit a = 0; a < 2; ++a) {
        for (Bit b = 0; b < 2; ++b) {
          probs(a, b) = static_cast<double>(count(x, y, a, b)) / static_cast<double>(n);
        }
      }
      table.set({x, y}, probs);
    }
  }
  return table;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  config.validate();
  const RoundSetup setup = make_round_setup(config.keep, config.p0_override);
  RandomStream uniform(config.seed);
  SimulationResult result;
  BobDeviceState dev;

  const std::uint64_t target_key_rounds = 2 * config.num_pairs;
  std::uint64_t key_rounds = 0;
  int first_cell = 0;
  Bit previous_b = 0;

  while (key_rounds < target_key_rounds) {
    const bool test = config.test_round_fraction > 0.0 &&
                      uniform() < config.test_round_fraction;
    if (test) {
      const int x = uniform() < 0.5 ? 1 : 2;
      const int y = uniform() < 0.5 ? 1 : 2;
      const auto [rec, next] = joint_round(dev, setup, x, y, uniform);
      dev = next;
      result.tests.add(x, y, rec.a_raw, rec.b_raw);
      if (x == 1) {
        ++result.keys.alice_x1_rounds;
        if (rec.a_raw == 0) ++result.keys.alice_x1_zeros;
      }
      continue;
    }

    const bool honest = !dev.replays_next_key_round();
    const auto [rec, next] = joint_round(dev, setup, 1, 3, uniform);
    dev = next;
    ++key_rounds;
    ++result.keys.alice_x1_rounds;
    if (rec.a_raw == 0) ++result.keys.alice_x1_zeros;

    const int cell = round_index({rec.a_final, rec.s, rec.t});
    if (honest) {
      ++result.keys.honest_rounds;
      if (rec.a_raw == rec.b_raw) ++result.keys.honest_agreements;
      first_cell = cell;
    } else {
      ++result.keys.replay_rounds;
      if (rec.b_raw != previous_b) ++result.keys.replay_mismatches;
      ++result.pairs.counts(cell, first_cell);
      ++result.pairs.total;
    }
    previous_b = rec.b_raw;
  }
  return result;
}

double empirical_entropy(const EmpiricalPairDistribution& emp) {
  return conditional_entropy(emp.frequencies());
}

ExactComparison compare_to_exact(const EmpiricalPairDistribution& emp,
                                 const PairMatrix<double>& exact) {
  const PairMatrix<double> freq = emp.frequencies();
  const double n = static_cast<double>(emp.total);
  ExactComparison cmp;
  cmp.total_variation = 0.5 * (freq - exact).cwiseAbs().sum();
  cmp.max_cell_deviation = (freq - exact).cwiseAbs().maxCoeff();
  for (int r1 = 0; r1 < kRoundCells; ++r1) {
    for (int r2 = 0; r2 < kRoundCells; ++r2) {
      const double p = exact(r2, r1);
      const double observed = static_cast<double>(emp.counts(r2, r1));
      const double variance = n * p * (1.0 - p);
      if (variance > 0.0) {
        cmp.z_scores(r2, r1) = (observed - n * p) / std::sqrt(variance);
      } else {
        cmp.z_scores(r2, r1) =
            observed == n * p ? 0.0 : std::numeric_limits<double>::infinity();
      }
      if (p == 0.0 && emp.counts(r2, r1) > 0) {
        cmp.off_support.push_back(
            {round_outcome(r2), round_outcome(r1), emp.counts(r2, r1)});
      }
    }
  }
  return cmp;
}

double Tolerances::scaled(double reference_tol, std::uint64_t n) {
  return reference_tol * std::sqrt(kReferenceSamples / static_cast<double>(n));
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::InsufficientSample: return "insufficient_sample";
  }
  return "?";
}

bool RunReport::all_passed() const {
  for (const CheckStatus s :
       {support, honest_correlation, total_variation_check, entropy_check, chsh_check}) {
    if (s == CheckStatus::Fail) return false;
  }
  return true;
}

namespace {

CheckStatus within(double error, double reference_tol, std::uint64_t n) {
  if (n < Tolerances::kMinimumSamples) return CheckStatus::InsufficientSample;
  return error < Tolerances::scaled(reference_tol, n) ? CheckStatus::Pass
                                                      : CheckStatus::Fail;
}

}  // namespace

RunReport make_run_report(const SimulationConfig& config, const SimulationResult& result) {
  RunReport r;
  r.config = config;
  r.p0_overridden = config.p0_override.has_value();
  r.p0 = config.p0_override.value_or(
      honest_correlation_table(make_bell_state<double>()).at({1, 3}).row(0).sum());

  const PairMatrix<double> exact =
      pair_distribution(KeyRoundParams<double>(r.p0, config.keep.value()));
  const ExactComparison cmp = compare_to_exact(result.pairs, exact);
  r.exact_entropy = conditional_entropy(exact);
  r.empirical_entropy = empirical_entropy(result.pairs);
  r.total_variation = cmp.total_variation;
  r.max_cell_deviation = cmp.max_cell_deviation;
  r.off_support_cells = cmp.off_support.size();

  r.test_rounds = result.tests.total();
  const CorrelationTable<double> tests = result.tests.to_table();
  try {
    r.chsh_estimate = chsh_value(tests);
  } catch (const std::out_of_range&) {
    r.chsh_estimate.reset();
  }

  const auto& keys = result.keys;
  r.honest_key_agreement = static_cast<double>(keys.honest_agreements) /
                           static_cast<double>(keys.honest_rounds);
  r.alice_p0_estimate = keys.alice_x1_rounds == 0
                            ? 0.0
                            : static_cast<double>(keys.alice_x1_zeros) /
                                  static_cast<double>(keys.alice_x1_rounds);

  r.support = cmp.support_ok() ? CheckStatus::Pass : CheckStatus::Fail;
  r.honest_correlation =
      keys.honest_agreements == keys.honest_rounds && keys.replay_mismatches == 0
          ? CheckStatus::Pass
          : CheckStatus::Fail;
  r.total_variation_check =
      within(r.total_variation, Tolerances::kTotalVariation, result.pairs.total);
  r.entropy_check = within(std::abs(r.empirical_entropy - r.exact_entropy),
                           Tolerances::kEntropy, result.pairs.total);
  if (r.chsh_estimate) {
    r.chsh_check = within(std::abs(*r.chsh_estimate - 2.0 * std::sqrt(2.0)),
                          Tolerances::kChsh, r.test_rounds);
  } else {
    r.chsh_check = CheckStatus::InsufficientSample;
  }
  return r;
}

void write_run_report(std::ostream& out, const RunReport& r) {
  out << std::setprecision(17);
  out << "field,value\n";
  out << "seed," << r.config.seed << '\n';
  out << "pairs," << r.config.num_pairs << '\n';
  out << "p0," << r.p0 << '\n';
  out << "p0_source," << (r.p0_overridden ? "override" : "born") << '\n';
  out << "p," << r.config.keep.value() << '\n';
  out << "test_fraction," << r.config.test_round_fraction << '\n';
  out << "test_rounds," << r.test_rounds << '\n';
  out << "exact_entropy," << r.exact_entropy << '\n';
  out << "empirical_entropy," << r.empirical_entropy << '\n';
  out << "exact_rate," << r.exact_entropy / 2.0 << '\n';
  out << "empirical_rate," << r.empirical_entropy / 2.0 << '\n';
  out << "tv_distance," << r.total_variation << '\n';
  out << "max_cell_deviation," << r.max_cell_deviation << '\n';
  out << "off_support_cells," << r.off_support_cells << '\n';
  out << "chsh_estimate,";
  if (r.chsh_estimate) {
    out << *r.chsh_estimate;
  } else {
    out << "n/a";
  }
  out << '\n';
  out << "honest_key_agreement," << r.honest_key_agreement << '\n';
  out << "alice_p0_estimate," << r.alice_p0_estimate << '\n';
  out << "support_check," << to_string(r.support) << '\n';
  out << "honest_correlation_check," << to_string(r.honest_correlation) << '\n';
  out << "tv_check," << to_string(r.total_variation_check) << '\n';
  out << "entropy_check," << to_string(r.entropy_check) << '\n';
  out << "chsh_check," << to_string(r.chsh_check) << '\n';
}

}  // namespace rps
