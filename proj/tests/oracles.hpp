#pragma once

// Reference computations that share no code with the library's algebra.

#include "rps/symbols.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace rps::oracle {

/// Born probabilities for observables cos(t) Z + sin(t) X on each side,
/// from their explicit real eigenvectors instead of (I +- O)/2 projectors.
inline std::array<std::array<double, 2>, 2> born_table(
    const std::array<std::complex<double>, 4>& psi, double theta_a, double theta_b) {
  const auto eigvec = [](double theta, int bit) -> std::array<double, 2> {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return bit == 0 ? std::array<double, 2>{c, s} : std::array<double, 2>{-s, c};
  };
  std::array<std::array<double, 2>, 2> out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const auto ea = eigvec(theta_a, a);
      const auto fb = eigvec(theta_b, b);
      std::complex<double> amp = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) amp += ea[i] * fb[j] * psi[2 * i + j];
      }
      out[a][b] = std::norm(amp);
    }
  }
  return out;
}

inline constexpr double kPi = 3.14159265358979323846;

/// Bloch angles of the standard observables.
inline double alice_angle(int x) { return x == 1 ? 0.0 : kPi / 2.0; }
inline double bob_angle(int y) {
  return y == 1 ? kPi / 4.0 : (y == 2 ? -kPi / 4.0 : 0.0);
}

/// Enumerates the raw sample space of one honest/replay key-round pair:
/// Alice's round-1 bit (Bob's equals it), two keep coins, Alice's round-2 bit
/// (Bob replays his round-1 bit), two keep coins. Index [round2][round1].
inline std::array<std::array<double, kRoundCells>, kRoundCells> brute_force_pair(double p0,
                                                                                 double p) {
  std::array<std::array<double, kRoundCells>, kRoundCells> table{};
  const double bit_prob[2] = {p0, 1.0 - p0};
  const double coin_prob[2] = {1.0 - p, p};  // coin value 1 = keeps a 1
  const auto round = [](int a, int b, int keep_a, int keep_b) {
    const bool s = a == 0 || keep_a == 1;
    const bool t = b == 0 || keep_b == 1;
    const int sym = (s && t) ? a : 2;
    return 4 * sym + 2 * static_cast<int>(s) + static_cast<int>(t);
  };
  for (int a1 = 0; a1 < 2; ++a1) {
    const int b1 = a1;
    for (int ka1 = 0; ka1 < 2; ++ka1) {
      for (int kb1 = 0; kb1 < 2; ++kb1) {
        for (int a2 = 0; a2 < 2; ++a2) {
          const int b2 = b1;
          for (int ka2 = 0; ka2 < 2; ++ka2) {
            for (int kb2 = 0; kb2 < 2; ++kb2) {
              table[round(a2, b2, ka2, kb2)][round(a1, b1, ka1, kb1)] +=
                  bit_prob[a1] * coin_prob[ka1] * coin_prob[kb1] * bit_prob[a2] *
                  coin_prob[ka2] * coin_prob[kb2];
            }
          }
        }
      }
    }
  }
  return table;
}

}  // namespace rps::oracle
