#pragma once

// Round-level behaviour of Alice's honest device, Bob's counter/replay device
// and the random postselection of key rounds.
//
// Every round consumes a fresh Bell pair in the same state, so the devices are
// driven by that state's correlation table. Randomness comes from any callable
// returning uniform doubles in [0, 1). A key round always consumes exactly four
// draws, in order: Alice outcome, Bob outcome, Alice keep coin, Bob keep coin.
// Test rounds consume the first two only.

#include "rps/quantum_core.hpp"
#include "rps/symbols.hpp"

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace rps {

template <typename U>
concept UniformSource = requires(U& u) {
  { u() } -> std::convertible_to<double>;
};

/// Seedable stream of uniform doubles in [0, 1) with 53 random bits each.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Probability that an outcome 1 is kept in a key round.
class KeepProbability {
 public:
  explicit KeepProbability(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("keep probability must lie in [0,1], got " +
                                  std::to_string(p));
    }
  }
  double value() const { return p_; }

 private:
  double p_;
};

/// Counter C of y=3 inputs and the output of the last honest key round.
struct BobDeviceState {
  std::uint64_t counter = 0;
  std::optional<Bit> memory;

  bool replays_next_key_round() const { return counter % 2 == 1; }
};

struct RoundRecord {
  int x = 1;
  int y = 1;
  Bit a_raw = 0;
  Bit b_raw = 0;
  Flag s = Flag::Keep;
  Flag t = Flag::Keep;
  KeySymbol a_final = KeySymbol::Zero;

  bool is_key_round() const { return x == 1 && y == 3; }
};

inline void check_alice_input(int x) {
  if (x != 1 && x != 2) {
    throw std::invalid_argument("Alice input must be 1 or 2, got " + std::to_string(x));
  }
}

inline void check_bob_input(int y) {
  if (y < 1 || y > 3) {
    throw std::invalid_argument("Bob input must be 1, 2 or 3, got " + std::to_string(y));
  }
}

/// Samples Alice's outcome from the Born marginal of M_x.
template <UniformSource U>
Bit alice_measure(const CorrelationTable<double>& pair_stats, int x, U& uniform) {
  check_alice_input(x);
  // Marginals are y independent; any y works.
  const double p_zero = pair_stats.at({x, 3}).row(0).sum();
  return uniform() < p_zero ? Bit{0} : Bit{1};
}

template <UniformSource U>
Bit alice_measure(const TwoQubitState<double>& state, int x, U& uniform) {
  return alice_measure(honest_correlation_table(state), x, uniform);
}

/// Bob's malicious device. Test inputs and even-counter key rounds sample
/// N_y from the Born distribution conditioned on Alice's outcome. Odd-counter
/// key rounds replay the stored output; memory is only overwritten in honest
/// key rounds. One uniform draw is consumed in every case.
template <UniformSource U>
std::pair<Bit, BobDeviceState> bob_device_step(BobDeviceState dev,
                                               const CorrelationTable<double>& pair_stats,
                                               int x, int y, Bit alice_raw, U& uniform) {
  check_alice_input(x);
  check_bob_input(y);
  const double u = uniform();

  if (y == 3 && dev.replays_next_key_round()) {
    if (!dev.memory) {
      throw std::logic_error("Bob device: replay round without stored output");
    }
    const Bit out = *dev.memory;
    ++dev.counter;
    return {out, dev};
  }

  const auto& probs = pair_stats.at({x, y});
  const double p_alice = probs.row(alice_raw).sum();
  if (!(p_alice > 0.0)) {
    throw std::invalid_argument("Bob device: Alice outcome has zero probability");
  }
  const Bit out = u < probs(alice_raw, 0) / p_alice ? Bit{0} : Bit{1};
  if (y == 3) {
    ++dev.counter;
    dev.memory = out;
  }
  return {out, dev};
}

template <UniformSource U>
std::pair<Bit, BobDeviceState> bob_device_step(BobDeviceState dev,
                                               const TwoQubitState<double>& state, int x,
                                               int y, Bit alice_raw, U& uniform) {
  return bob_device_step(dev, honest_correlation_table(state), x, y, alice_raw, uniform);
}

/// Outcome 0 is always kept; outcome 1 is kept with probability p. The round
/// survives only if both parties keep. Draws Alice's coin then Bob's coin.
template <UniformSource U>
std::pair<AnnouncementPair, KeySymbol> postselect(Bit a_raw, Bit b_raw,
                                                  KeepProbability keep, U& uniform) {
  const double coin_a = uniform();
  const double coin_b = uniform();
  AnnouncementPair ann;
  ann.s = (a_raw == 0 || coin_a < keep.value()) ? Flag::Keep : Flag::Discard;
  ann.t = (b_raw == 0 || coin_b < keep.value()) ? Flag::Keep : Flag::Discard;
  const KeySymbol a_final = (ann.s == Flag::Keep && ann.t == Flag::Keep)
                                ? symbol_from_bit(a_raw)
                                : KeySymbol::Discarded;
  return {ann, a_final};
}

struct RoundSetup {
  /// Statistics of the fresh Bell pair handed out every round.
  CorrelationTable<double> pair_stats;
  KeepProbability keep{1.0};
  /// Replaces Alice's Born marginal in key rounds with a biased coin
  /// p(a=0) = p0. Bob's honest key-round output still equals Alice's.
  std::optional<double> p0_override;
};

inline RoundSetup make_round_setup(KeepProbability keep,
                                   std::optional<double> p0_override = std::nullopt) {
  if (p0_override && !(*p0_override >= 0.0 && *p0_override <= 1.0)) {
    throw std::invalid_argument("p0 override must lie in [0,1]");
  }
  return RoundSetup{honest_correlation_table(make_bell_state<double>()), keep,
                    p0_override};
}

template <UniformSource U>
std::pair<RoundRecord, BobDeviceState> joint_round(const BobDeviceState& dev,
                                                   const RoundSetup& setup, int x, int y,
                                                   U& uniform) {
  check_alice_input(x);
  check_bob_input(y);
  RoundRecord rec;
  rec.x = x;
  rec.y = y;

  if (rec.is_key_round() && setup.p0_override) {
    rec.a_raw = uniform() < *setup.p0_override ? Bit{0} : Bit{1};
  } else {
    rec.a_raw = alice_measure(setup.pair_stats, x, uniform);
  }

  BobDeviceState next;
  if (rec.is_key_round() && setup.p0_override && !dev.replays_next_key_round()) {
    // Biased key-round coin: keep the perfect honest correlation.
    uniform();
    next = dev;
    ++next.counter;
    next.memory = rec.a_raw;
    rec.b_raw = rec.a_raw;
  } else {
    std::tie(rec.b_raw, next) =
        bob_device_step(dev, setup.pair_stats, x, y, rec.a_raw, uniform);
  }

  if (rec.is_key_round()) {
    const auto [ann, a_final] = postselect(rec.a_raw, rec.b_raw, setup.keep, uniform);
    rec.s = ann.s;
    rec.t = ann.t;
    rec.a_final = a_final;
  } else {
    rec.a_final = symbol_from_bit(rec.a_raw);
  }
  return {rec, next};
}

}  // namespace rps
