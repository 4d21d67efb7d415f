#include "rps/devices.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace rps {
namespace {

/// Replays a fixed list of uniforms.
struct Scripted {
  std::vector<double> values;
  std::size_t next = 0;
  double operator()() { return values.at(next++); }
};

const CorrelationTable<double>& bell_stats() {
  static const auto table = honest_correlation_table(make_bell_state());
  return table;
}

TEST(AliceMeasure, MarginalsAreFair) {
  RandomStream rng(7);
  for (int x : {1, 2}) {
    const int n = 1000000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) zeros += alice_measure(bell_stats(), x, rng) == 0;
    EXPECT_NEAR(static_cast<double>(zeros) / n, 0.5, 0.002) << "x=" << x;
  }
}

TEST(AliceMeasure, StateOverloadAndInputCheck) {
  Scripted u{{0.49, 0.51}};
  EXPECT_EQ(alice_measure(make_bell_state(), 1, u), 0);
  EXPECT_EQ(alice_measure(make_bell_state(), 1, u), 1);
  EXPECT_THROW(alice_measure(bell_stats(), 3, u), std::invalid_argument);
}

TEST(BobDevice, HonestKeyRoundCopiesAlice) {
  Scripted u{{0.0}};
  const auto [out, next] = bob_device_step(BobDeviceState{}, bell_stats(), 1, 3, Bit{1}, u);
  EXPECT_EQ(out, 1);
  EXPECT_EQ(next.counter, 1u);
  ASSERT_TRUE(next.memory.has_value());
  EXPECT_EQ(*next.memory, 1);
}

TEST(BobDevice, ReplayRoundRepeatsMemory) {
  for (Bit alice : {Bit{0}, Bit{1}}) {
    Scripted u{{0.99}};
    BobDeviceState dev{1, Bit{0}};
    const auto [out, next] = bob_device_step(dev, make_bell_state(), 1, 3, alice, u);
    EXPECT_EQ(out, 0);
    EXPECT_EQ(next.counter, 2u);
    EXPECT_EQ(*next.memory, 0);
    EXPECT_EQ(u.next, 1u);
  }
}

TEST(BobDevice, TestRoundLeavesCounterAlone) {
  Scripted u{{0.3}};
  BobDeviceState dev{5, Bit{1}};
  const auto [out, next] = bob_device_step(dev, bell_stats(), 1, 1, Bit{0}, u);
  EXPECT_EQ(out, 0);  // p(b=0 | a=0) = 0.854 > 0.3
  EXPECT_EQ(next.counter, 5u);
  EXPECT_EQ(*next.memory, 1);
}

TEST(BobDevice, ReplayWithoutMemoryIsFatal) {
  Scripted u{{0.5}};
  BobDeviceState broken{1, std::nullopt};
  EXPECT_THROW(bob_device_step(broken, bell_stats(), 1, 3, Bit{0}, u), std::logic_error);
  EXPECT_THROW(bob_device_step(BobDeviceState{}, bell_stats(), 1, 4, Bit{0}, u),
               std::invalid_argument);
}

TEST(Postselect, ZerosAlwaysKept) {
  Scripted u{{0.999, 0.999}};
  const auto [ann, sym] = postselect(Bit{0}, Bit{0}, KeepProbability(0.0), u);
  EXPECT_EQ(ann, (AnnouncementPair{Flag::Keep, Flag::Keep}));
  EXPECT_EQ(sym, KeySymbol::Zero);
}

TEST(Postselect, ZeroKeepProbabilityDiscardsOnes) {
  Scripted u{{0.0, 0.0}};
  const auto [ann, sym] = postselect(Bit{1}, Bit{1}, KeepProbability(0.0), u);
  EXPECT_EQ(ann, (AnnouncementPair{Flag::Discard, Flag::Discard}));
  EXPECT_EQ(sym, KeySymbol::Discarded);
}

TEST(Postselect, HalfKeepFrequency) {
  RandomStream rng(11);
  const int n = 1000000;
  int kept_a = 0;
  int kept_b = 0;
  int both = 0;
  for (int i = 0; i < n; ++i) {
    const auto [ann, sym] = postselect(Bit{1}, Bit{1}, KeepProbability(0.5), rng);
    kept_a += ann.s == Flag::Keep;
    kept_b += ann.t == Flag::Keep;
    both += sym == KeySymbol::One;
  }
  const double band = 3.0 * std::sqrt(0.25 / n);
  EXPECT_NEAR(kept_a / double(n), 0.5, band);
  EXPECT_NEAR(kept_b / double(n), 0.5, band);
  // Independent coins: both kept with probability 1/4.
  EXPECT_NEAR(both / double(n), 0.25, 3.0 * std::sqrt(0.1875 / n));
}

TEST(KeepProbability, RejectsOutOfRange) {
  EXPECT_THROW(KeepProbability(-0.1), std::invalid_argument);
  EXPECT_THROW(KeepProbability(1.5), std::invalid_argument);
  EXPECT_THROW(KeepProbability(std::nan("")), std::invalid_argument);
}

TEST(JointRound, TestRoundCorrelation) {
  const RoundSetup setup = make_round_setup(KeepProbability(0.5));
  RandomStream rng(3);
  BobDeviceState dev;
  const int n = 1000000;
  int equal = 0;
  for (int i = 0; i < n; ++i) {
    const auto [rec, next] = joint_round(dev, setup, 1, 1, rng);
    dev = next;
    equal += rec.a_raw == rec.b_raw;
    ASSERT_EQ(rec.s, Flag::Keep);
    ASSERT_EQ(rec.t, Flag::Keep);
    ASSERT_EQ(rec.a_final, symbol_from_bit(rec.a_raw));
  }
  EXPECT_EQ(dev.counter, 0u);
  EXPECT_NEAR(equal / double(n), (1.0 + 1.0 / std::sqrt(2.0)) / 2.0, 0.0015);
}

TEST(JointRound, ReplayIgnoresFreshState) {
  const RoundSetup setup = make_round_setup(KeepProbability(1.0));
  BobDeviceState dev{3, Bit{1}};
  // Alice draws 0.1 -> outcome 0; Bob still replays 1.
  Scripted u{{0.1, 0.0, 0.0, 0.0}};
  const auto [rec, next] = joint_round(dev, setup, 1, 3, u);
  EXPECT_EQ(rec.a_raw, 0);
  EXPECT_EQ(rec.b_raw, 1);
  EXPECT_EQ(next.counter, 4u);
  EXPECT_EQ(u.next, 4u);
}

// Random input schedules: every device invariant must hold on every round.
TEST(JointRound, InvariantsOverRandomSchedules) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream schedule(1000 + seed);
    RandomStream rng(seed);
    const double keep = schedule();
    const RoundSetup setup = make_round_setup(KeepProbability(keep));
    BobDeviceState dev;
    std::uint64_t key_rounds = 0;
    std::optional<Bit> last_key_b;
    for (int i = 0; i < 5000; ++i) {
      const bool key = schedule() < 0.5;
      const int x = key ? 1 : (schedule() < 0.5 ? 1 : 2);
      const int y = key ? 3 : (schedule() < 0.5 ? 1 : 2);
      const bool honest = !dev.replays_next_key_round();
      const auto [rec, next] = joint_round(dev, setup, x, y, rng);

      ASSERT_EQ(next.memory.has_value(), next.counter >= 1);
      if (!key) {
        ASSERT_EQ(next.counter, dev.counter);
        ASSERT_EQ(rec.s, Flag::Keep);
        ASSERT_EQ(rec.t, Flag::Keep);
        ASSERT_EQ(rec.a_final, symbol_from_bit(rec.a_raw));
      } else {
        ++key_rounds;
        ASSERT_EQ(next.counter, key_rounds);
        // k-th key round (1-based) is honest iff k is odd.
        ASSERT_EQ(honest, key_rounds % 2 == 1);
        if (honest) {
          ASSERT_EQ(rec.a_raw, rec.b_raw);
        } else {
          ASSERT_EQ(rec.b_raw, *last_key_b);
        }
        last_key_b = rec.b_raw;
        if (rec.s == Flag::Discard) ASSERT_EQ(rec.a_raw, 1);
        if (rec.t == Flag::Discard) ASSERT_EQ(rec.b_raw, 1);
        const bool discarded = rec.s == Flag::Discard || rec.t == Flag::Discard;
        ASSERT_EQ(rec.a_final == KeySymbol::Discarded, discarded);
        if (!discarded) ASSERT_EQ(rec.a_final, symbol_from_bit(rec.a_raw));
      }
      dev = next;
    }
  }
}

TEST(JointRound, BiasedKeyRoundsKeepHonestCorrelation) {
  const RoundSetup setup = make_round_setup(KeepProbability(0.5), 0.8);
  RandomStream rng(5);
  BobDeviceState dev;
  int zeros = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const bool honest = !dev.replays_next_key_round();
    const auto [rec, next] = joint_round(dev, setup, 1, 3, rng);
    if (honest) ASSERT_EQ(rec.a_raw, rec.b_raw);
    zeros += rec.a_raw == 0;
    dev = next;
  }
  EXPECT_NEAR(zeros / double(n), 0.8, 3.0 * std::sqrt(0.16 / n));
}

}  // namespace
}  // namespace rps
