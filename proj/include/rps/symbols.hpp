#pragma once

// Public alphabet of a key round: Alice's post-selected symbol and the two
// keep/discard announcements.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rps {

using Bit = std::uint8_t;

/// Public keep/discard announcement. Discard is written as "bot" and
/// Keep as "top" in reports.
enum class Flag : std::uint8_t { Discard = 0, Keep = 1 };

enum class KeySymbol : std::uint8_t { Zero = 0, One = 1, Discarded = 2 };

struct AnnouncementPair {
  Flag s = Flag::Keep;  // Alice
  Flag t = Flag::Keep;  // Bob
  bool operator==(const AnnouncementPair&) const = default;
};

inline KeySymbol symbol_from_bit(Bit b) {
  return b == 0 ? KeySymbol::Zero : KeySymbol::One;
}

inline const char* to_string(Flag f) { return f == Flag::Keep ? "top" : "bot"; }

inline const char* to_string(KeySymbol a) {
  switch (a) {
    case KeySymbol::Zero: return "0";
    case KeySymbol::One: return "1";
    case KeySymbol::Discarded: return "bot";
  }
  return "?";
}

/// (a, s, t) for one key round. There are 12 combinations; most have zero
/// probability but the dense layout keeps the algebra simple.
struct RoundOutcome {
  KeySymbol a = KeySymbol::Zero;
  Flag s = Flag::Keep;
  Flag t = Flag::Keep;
  bool operator==(const RoundOutcome&) const = default;
};

inline constexpr int kRoundCells = 12;

constexpr int round_index(RoundOutcome o) {
  return 4 * static_cast<int>(o.a) + 2 * static_cast<int>(o.s) + static_cast<int>(o.t);
}

constexpr RoundOutcome round_outcome(int index) {
  return RoundOutcome{static_cast<KeySymbol>(index / 4),
                      static_cast<Flag>((index / 2) % 2),
                      static_cast<Flag>(index % 2)};
}

inline std::string to_string(RoundOutcome o) {
  return std::string("(") + to_string(o.a) + "," + to_string(o.s) + "," +
         to_string(o.t) + ")";
}

}  // namespace rps
