#pragma once

// Born-rule engine for the honest two-qubit CHSH statistics.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace rps {

/// Tolerance used for every check in the quantum layer.
inline constexpr double kQuantumTolerance = 1e-12;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Amplitudes in the basis order |00>, |01>, |10>, |11> (Alice is the left qubit).
template <typename Scalar>
using TwoQubitState = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

/// Joint outcome probabilities indexed as (a, b).
template <typename Scalar>
using OutcomeTable = Eigen::Matrix<Scalar, 2, 2>;

enum class Party { Alice, Bob };

template <typename Scalar>
bool is_normalized(const TwoQubitState<Scalar>& state,
                   Scalar tol = Scalar(kQuantumTolerance)) {
  using std::abs;
  return abs(state.squaredNorm() - Scalar(1)) <= tol;
}

/// (|00> + |11>) / sqrt(2)
template <typename Scalar = double>
TwoQubitState<Scalar> make_bell_state() {
  using std::sqrt;
  const Scalar amp = Scalar(1) / sqrt(Scalar(2));
  TwoQubitState<Scalar> state = TwoQubitState<Scalar>::Zero();
  state(0) = amp;
  state(3) = amp;
  return state;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_z() {
  Matrix2c<Scalar> m;
  m << Scalar(1), Scalar(0), Scalar(0), Scalar(-1);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_x() {
  Matrix2c<Scalar> m;
  m << Scalar(0), Scalar(1), Scalar(1), Scalar(0);
  return m;
}

/// Hermitian 2x2 observable with eigenvalues +-1. Eigenvalue +1 is reported
/// as outcome bit 0 and eigenvalue -1 as outcome bit 1.
template <typename Scalar>
class BinaryObservable {
 public:
  explicit BinaryObservable(const Matrix2c<Scalar>& matrix) : matrix_(matrix) {
    using std::abs;
    const Scalar tol(kQuantumTolerance);
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw std::invalid_argument("BinaryObservable: matrix is not Hermitian");
    }
    const Matrix2c<Scalar> sq = matrix_ * matrix_;
    if ((sq - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff() > tol) {
      throw std::invalid_argument(
          "BinaryObservable: matrix does not square to the identity");
    }
  }

  const Matrix2c<Scalar>& matrix() const { return matrix_; }

  /// Projector (I + O)/2 for bit 0, (I - O)/2 for bit 1.
  Matrix2c<Scalar> projector(int bit) const {
    const Matrix2c<Scalar> id = Matrix2c<Scalar>::Identity();
    return bit == 0 ? Matrix2c<Scalar>((id + matrix_) / Scalar(2))
                    : Matrix2c<Scalar>((id - matrix_) / Scalar(2));
  }

 private:
  Matrix2c<Scalar> matrix_;
};

/// The CHSH measurements: Alice M1 = Z, M2 = X; Bob N1 = (Z+X)/sqrt2,
/// N2 = (Z-X)/sqrt2 and the key-round measurement N3 = Z.
template <typename Scalar = double>
BinaryObservable<Scalar> standard_observable(Party party, int input) {
  using std::sqrt;
  const Matrix2c<Scalar> z = pauli_z<Scalar>();
  const Matrix2c<Scalar> x = pauli_x<Scalar>();
  const Scalar inv_sqrt2 = Scalar(1) / sqrt(Scalar(2));
  if (party == Party::Alice) {
    switch (input) {
      case 1: return BinaryObservable<Scalar>(z);
      case 2: return BinaryObservable<Scalar>(x);
      default: break;
    }
    throw std::invalid_argument("Alice input must be 1 or 2, got " +
                                std::to_string(input));
  }
  switch (input) {
    case 1: return BinaryObservable<Scalar>((z + x) * inv_sqrt2);
    case 2: return BinaryObservable<Scalar>((z - x) * inv_sqrt2);
    case 3: return BinaryObservable<Scalar>(z);
    default: break;
  }
  throw std::invalid_argument("Bob input must be 1, 2 or 3, got " +
                              std::to_string(input));
}

template <typename Scalar = double>
std::map<std::pair<Party, int>, BinaryObservable<Scalar>> standard_observables() {
  std::map<std::pair<Party, int>, BinaryObservable<Scalar>> out;
  for (int x : {1, 2}) {
    out.emplace(std::pair{Party::Alice, x}, standard_observable<Scalar>(Party::Alice, x));
  }
  for (int y : {1, 2, 3}) {
    out.emplace(std::pair{Party::Bob, y}, standard_observable<Scalar>(Party::Bob, y));
  }
  return out;
}

template <typename Scalar>
Matrix4c<Scalar> kron(const Matrix2c<Scalar>& lhs, const Matrix2c<Scalar>& rhs) {
  Matrix4c<Scalar> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.template block<2, 2>(2 * i, 2 * j) = lhs(i, j) * rhs;
    }
  }
  return out;
}

/// p(a, b) = <psi| P_a (x) Q_b |psi>.
template <typename Scalar>
OutcomeTable<Scalar> outcome_distribution(const TwoQubitState<Scalar>& state,
                                          const BinaryObservable<Scalar>& obs_a,
                                          const BinaryObservable<Scalar>& obs_b) {
  if (!is_normalized(state)) {
    throw std::invalid_argument("outcome_distribution: state is not normalized");
  }
  OutcomeTable<Scalar> probs;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Matrix4c<Scalar> proj = kron(obs_a.projector(a), obs_b.projector(b));
      probs(a, b) = (state.adjoint() * proj * state)(0, 0).real();
    }
  }
  return probs;
}

struct Inputs {
  int x = 1;
  int y = 1;
  auto operator<=>(const Inputs&) const = default;
};

/// p(ab|xy) for the input pairs that have been filled in.
template <typename Scalar>
class CorrelationTable {
 public:
  void set(Inputs in, const OutcomeTable<Scalar>& probs) {
    if (in.x < 1 || in.x > 2 || in.y < 1 || in.y > 3) {
      throw std::invalid_argument("CorrelationTable: inputs out of range");
    }
    cells_[in] = probs;
  }

  bool contains(Inputs in) const { return cells_.count(in) != 0; }

  const OutcomeTable<Scalar>& at(Inputs in) const {
    auto it = cells_.find(in);
    if (it == cells_.end()) {
      throw std::out_of_range("CorrelationTable: no entry for (x=" +
                              std::to_string(in.x) + ", y=" + std::to_string(in.y) + ")");
    }
    return it->second;
  }

  Scalar probability(int a, int b, Inputs in) const { return at(in)(a, b); }

  const std::map<Inputs, OutcomeTable<Scalar>>& cells() const { return cells_; }

 private:
  std::map<Inputs, OutcomeTable<Scalar>> cells_;
};

/// Full p(ab|xy), x in {1,2}, y in {1,2,3}, for the standard observables.
template <typename Scalar>
CorrelationTable<Scalar> honest_correlation_table(const TwoQubitState<Scalar>& state) {
  CorrelationTable<Scalar> table;
  for (int x : {1, 2}) {
    const auto obs_a = standard_observable<Scalar>(Party::Alice, x);
    for (int y : {1, 2, 3}) {
      table.set({x, y}, outcome_distribution(
                            state, obs_a, standard_observable<Scalar>(Party::Bob, y)));
    }
  }
  return table;
}

/// E_xy = p(a=b|xy) - p(a!=b|xy)
template <typename Scalar>
Scalar correlator(const OutcomeTable<Scalar>& probs) {
  return probs(0, 0) + probs(1, 1) - probs(0, 1) - probs(1, 0);
}

/// S = E11 + E12 + E21 - E22.
template <typename Scalar>
Scalar chsh_value(const CorrelationTable<Scalar>& table) {
  return correlator(table.at({1, 1})) + correlator(table.at({1, 2})) +
         correlator(table.at({2, 1})) - correlator(table.at({2, 2}));
}

template <typename Scalar>
bool is_no_signalling(const CorrelationTable<Scalar>& table,
                      Scalar tol = Scalar(kQuantumTolerance)) {
  using std::abs;
  // Alice's marginal must not depend on y, Bob's must not depend on x.
  for (const auto& [in, probs] : table.cells()) {
    for (const auto& [other, other_probs] : table.cells()) {
      if (in.x == other.x &&
          abs(probs.row(0).sum() - other_probs.row(0).sum()) > tol) {
        return false;
      }
      if (in.y == other.y &&
          abs(probs.col(0).sum() - other_probs.col(0).sum()) > tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace rps
