#pragma once

// Closed-form distributions of one honest/replay pair of key rounds and the
// attacker's conditional entropy H(A1 A2 | S1 S2 T1 T2).

#include "rps/symbols.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rps {

/// Probability of each (a, s, t) cell, indexed by round_index().
template <typename Scalar>
using RoundVector = Eigen::Matrix<Scalar, kRoundCells, 1>;

/// Joint table of a round pair: row = round-2 cell, column = round-1 cell.
template <typename Scalar>
using PairMatrix = Eigen::Matrix<Scalar, kRoundCells, kRoundCells>;

/// Normalization tolerance accepted by conditional_entropy.
inline constexpr double kNormalizationTolerance = 1e-9;

template <typename Scalar>
class KeyRoundParams {
 public:
  KeyRoundParams(Scalar p0, Scalar keep) : p0_(p0), keep_(keep) {
    if (!(p0 >= Scalar(0) && p0 <= Scalar(1))) {
      throw std::invalid_argument("p0 must lie in [0,1]");
    }
    if (!(keep >= Scalar(0) && keep <= Scalar(1))) {
      throw std::invalid_argument("keep probability must lie in [0,1]");
    }
  }

  Scalar p0() const { return p0_; }
  Scalar p1() const { return Scalar(1) - p0_; }
  Scalar keep() const { return keep_; }

 private:
  Scalar p0_;
  Scalar keep_;
};

/// Which conditional applies to round 2: Alice's round-1 symbol was 0, or the
/// underlying round-1 outcome was 1 (a1 in {1, bot}).
enum class FirstRoundBranch { Zero, OneOrDiscarded };

namespace detail {

template <typename Scalar>
void put(RoundVector<Scalar>& v, KeySymbol a, Flag s, Flag t, Scalar value) {
  v(round_index({a, s, t})) = value;
}

}  // namespace detail

template <typename Scalar>
RoundVector<Scalar> first_round_distribution(const KeyRoundParams<Scalar>& params) {
  const Scalar p0 = params.p0();
  const Scalar p1 = params.p1();
  const Scalar p = params.keep();
  const Scalar q = Scalar(1) - p;
  RoundVector<Scalar> v = RoundVector<Scalar>::Zero();
  detail::put(v, KeySymbol::Zero, Flag::Keep, Flag::Keep, p0);
  detail::put(v, KeySymbol::One, Flag::Keep, Flag::Keep, p1 * p * p);
  detail::put(v, KeySymbol::Discarded, Flag::Keep, Flag::Discard, p1 * p * q);
  detail::put(v, KeySymbol::Discarded, Flag::Discard, Flag::Keep, p1 * q * p);
  detail::put(v, KeySymbol::Discarded, Flag::Discard, Flag::Discard, p1 * q * q);
  return v;
}

/// Round-2 distribution given the round-1 branch. In round 2 Bob's device
/// replays its round-1 output, which equals Alice's underlying round-1 bit.
template <typename Scalar>
RoundVector<Scalar> second_round_conditional(const KeyRoundParams<Scalar>& params,
                                             FirstRoundBranch branch) {
  const Scalar p0 = params.p0();
  const Scalar p1 = params.p1();
  const Scalar p = params.keep();
  const Scalar q = Scalar(1) - p;
  RoundVector<Scalar> v = RoundVector<Scalar>::Zero();
  if (branch == FirstRoundBranch::Zero) {
    // Bob replays 0, which is never discarded.
    detail::put(v, KeySymbol::Zero, Flag::Keep, Flag::Keep, p0);
    detail::put(v, KeySymbol::One, Flag::Keep, Flag::Keep, p1 * p);
    detail::put(v, KeySymbol::Discarded, Flag::Discard, Flag::Keep, p1 * q);
    return v;
  }
  // Bob replays 1 and keeps it with probability p.
  detail::put(v, KeySymbol::Zero, Flag::Keep, Flag::Keep, p0 * p);
  detail::put(v, KeySymbol::One, Flag::Keep, Flag::Keep, p1 * p * p);
  detail::put(v, KeySymbol::Discarded, Flag::Discard, Flag::Keep, p1 * q * p);
  detail::put(v, KeySymbol::Discarded, Flag::Keep, Flag::Discard, (p0 + p1 * p) * q);
  detail::put(v, KeySymbol::Discarded, Flag::Discard, Flag::Discard, p1 * q * q);
  return v;
}

/// p(a2,s2,t2,a1,s1,t1) = p(a2,s2,t2 | a1) p(a1,s1,t1).
template <typename Scalar>
PairMatrix<Scalar> pair_distribution(const KeyRoundParams<Scalar>& params) {
  const RoundVector<Scalar> first = first_round_distribution(params);
  const RoundVector<Scalar> after_zero =
      second_round_conditional(params, FirstRoundBranch::Zero);
  const RoundVector<Scalar> after_one =
      second_round_conditional(params, FirstRoundBranch::OneOrDiscarded);
  PairMatrix<Scalar> pair;
  for (int col = 0; col < kRoundCells; ++col) {
    const bool zero = round_outcome(col).a == KeySymbol::Zero;
    pair.col(col) = (zero ? after_zero : after_one) * first(col);
  }
  return pair;
}

/// H(A1 A2 | S1 S2 T1 T2) in bits, with 0 log 0 = 0.
template <typename Scalar>
Scalar conditional_entropy(const PairMatrix<Scalar>& dist) {
  using std::abs;
  using std::log2;
  if ((dist.array() < Scalar(0)).any()) {
    throw std::invalid_argument("conditional_entropy: negative probability");
  }
  if (abs(dist.sum() - Scalar(1)) > Scalar(kNormalizationTolerance)) {
    throw std::invalid_argument("conditional_entropy: distribution is not normalized");
  }
  // Announcement classes (s1,t1,s2,t2): index 2*s+t per round.
  Eigen::Matrix<Scalar, 4, 4> mass = Eigen::Matrix<Scalar, 4, 4>::Zero();
  const auto flags = [](int cell) { return cell % 4; };
  for (int r1 = 0; r1 < kRoundCells; ++r1) {
    for (int r2 = 0; r2 < kRoundCells; ++r2) {
      mass(flags(r2), flags(r1)) += dist(r2, r1);
    }
  }
  Scalar h(0);
  for (int r1 = 0; r1 < kRoundCells; ++r1) {
    for (int r2 = 0; r2 < kRoundCells; ++r2) {
      const Scalar pr = dist(r2, r1);
      if (pr > Scalar(0)) {
        h += pr * log2(mass(flags(r2), flags(r1)) / pr);
      }
    }
  }
  return h;
}

/// Attacker entropy per key round, H(A1 A2 | S1 S2 T1 T2) / 2.
template <typename Scalar>
Scalar attack_rate(const KeyRoundParams<Scalar>& params) {
  return conditional_entropy(pair_distribution(params)) / Scalar(2);
}

template <typename Scalar>
struct SweepPoint {
  Scalar p;
  Scalar entropy_per_round;
};

template <typename Scalar>
std::vector<SweepPoint<Scalar>> sweep(Scalar p0, std::span<const Scalar> p_grid) {
  for (const Scalar p : p_grid) {
    if (!(p >= Scalar(0) && p <= Scalar(1))) {
      throw std::invalid_argument("sweep: grid point outside [0,1]");
    }
  }
  std::vector<SweepPoint<Scalar>> out;
  out.reserve(p_grid.size());
  for (const Scalar p : p_grid) {
    out.push_back({p, attack_rate(KeyRoundParams<Scalar>(p0, p))});
  }
  return out;
}

/// `steps` uniformly spaced points from lo to hi; the last point is exactly hi.
template <typename Scalar>
std::vector<Scalar> uniform_grid(Scalar lo, Scalar hi, int steps) {
  if (steps < 2) throw std::invalid_argument("uniform_grid: need at least 2 steps");
  std::vector<Scalar> grid(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * Scalar(k) / Scalar(steps - 1);
  }
  grid.back() = hi;
  return grid;
}

}  // namespace rps
