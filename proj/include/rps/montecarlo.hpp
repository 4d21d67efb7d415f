#pragma once

// End-to-end stochastic runs of the protocol against the replaying device,
// with empirical tallies that can be checked against the closed forms.

#include "rps/devices.hpp"
#include "rps/exact_analysis.hpp"
#include "rps/quantum_core.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rps {

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::uint64_t num_pairs = 1;
  std::optional<double> p0_override;
  KeepProbability keep{0.5};
  /// Probability that a scheduled round is a test round (x, y uniform in {1,2}).
  double test_round_fraction = 0.0;

  void validate() const;
};

using PairCounts = Eigen::Matrix<std::uint64_t, kRoundCells, kRoundCells>;

/// Counts of (round-2 cell, round-1 cell) over honest/replay key-round pairs.
struct EmpiricalPairDistribution {
  PairCounts counts = PairCounts::Zero();
  std::uint64_t total = 0;

  PairMatrix<double> frequencies() const;
};

/// Raw counts n(a, b | x, y) for test rounds.
class TestRoundCounts {
 public:
  void add(int x, int y, Bit a, Bit b) { ++counts_[index(x, y, a, b)]; }
  std::uint64_t count(int x, int y, Bit a, Bit b) const { return counts_[index(x, y, a, b)]; }
  std::uint64_t rounds(int x, int y) const;
  std::uint64_t total() const;

  /// Normalized table over the (x, y) cells that received at least one round.
  CorrelationTable<double> to_table() const;

 private:
  static std::size_t index(int x, int y, Bit a, Bit b) {
    return static_cast<std::size_t>(((x - 1) * 2 + (y - 1)) * 4 + a * 2 + b);
  }
  std::array<std::uint64_t, 16> counts_{};
};

struct KeyRoundStatistics {
  std::uint64_t honest_rounds = 0;
  std::uint64_t honest_agreements = 0;  // a_raw == b_raw
  std::uint64_t replay_rounds = 0;
  std::uint64_t replay_mismatches = 0;  // b_raw != previous key round's b_raw
  std::uint64_t alice_x1_rounds = 0;    // test and key rounds with x = 1
  std::uint64_t alice_x1_zeros = 0;
};

struct SimulationResult {
  EmpiricalPairDistribution pairs;
  TestRoundCounts tests;
  KeyRoundStatistics keys;
};

/// Runs key-round pairs until num_pairs honest/replay pairs are complete.
/// Before each round one schedule draw decides test vs key (skipped when the
/// test fraction is 0); test rounds then draw x and y.
SimulationResult run_simulation(const SimulationConfig& config);

/// Plug-in estimate of H(A1 A2 | S1 S2 T1 T2).
double empirical_entropy(const EmpiricalPairDistribution& emp);

struct OffSupportCell {
  RoundOutcome round2;
  RoundOutcome round1;
  std::uint64_t count;
};

struct ExactComparison {
  double total_variation = 0.0;
  double max_cell_deviation = 0.0;
  /// (n_i - n p_i) / sqrt(n p_i (1 - p_i)); zero-variance cells are 0 when
  /// the count matches and +inf otherwise.
  PairMatrix<double> z_scores = PairMatrix<double>::Zero();
  std::vector<OffSupportCell> off_support;

  bool support_ok() const { return off_support.empty(); }
};

ExactComparison compare_to_exact(const EmpiricalPairDistribution& emp,
                                 const PairMatrix<double>& exact);

/// Statistical tolerances, declared at a reference sample size of 1e6 and
/// scaled by sqrt(1e6 / n) for other sizes.
struct Tolerances {
  static constexpr double kReferenceSamples = 1e6;
  static constexpr double kTotalVariation = 0.002;
  static constexpr double kEntropy = 0.005;
  static constexpr double kChsh = 0.01;
  /// Below this many samples the statistical checks are not evaluated.
  static constexpr std::uint64_t kMinimumSamples = 10000;

  static double scaled(double reference_tol, std::uint64_t n);
};

enum class CheckStatus { Pass, Fail, InsufficientSample };

const char* to_string(CheckStatus s);

struct RunReport {
  SimulationConfig config;
  double p0 = 0.5;
  bool p0_overridden = false;
  std::uint64_t test_rounds = 0;
  double exact_entropy = 0.0;
  double empirical_entropy = 0.0;
  double total_variation = 0.0;
  double max_cell_deviation = 0.0;
  std::uint64_t off_support_cells = 0;
  std::optional<double> chsh_estimate;
  double honest_key_agreement = 0.0;
  double alice_p0_estimate = 0.0;

  CheckStatus support = CheckStatus::Pass;
  CheckStatus honest_correlation = CheckStatus::Pass;
  CheckStatus total_variation_check = CheckStatus::Pass;
  CheckStatus entropy_check = CheckStatus::Pass;
  CheckStatus chsh_check = CheckStatus::Pass;

  bool all_passed() const;
};

RunReport make_run_report(const SimulationConfig& config, const SimulationResult& result);

/// `field,value` lines; byte-identical for identical inputs.
void write_run_report(std::ostream& out, const RunReport& report);

}  // namespace rps
