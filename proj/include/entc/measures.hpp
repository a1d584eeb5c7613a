#pragma once

#include <optional>
#include <vector>

#include "entc/states.hpp"

namespace entc {

/// A split of the qubits of one state into two nonempty disjoint sides.
struct Bipartition {
  std::vector<int> left;
  std::vector<int> right;

  // Right side is the complement of `left` in {0..n-1}; throws InvalidArgument
  // if either side would be empty or `left` has bad indices.
  static Bipartition from_left(std::vector<int> left, int qubit_count);

  bool single_qubit_cut() const { return left.size() == 1 || right.size() == 1; }
};

/// The i-tangles of one state. tau3 exists for n >= 3 and tau4 for n == 4.
struct TangleVector {
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::optional<double> tau3;
  std::optional<double> tau4;
  double epsilon = 0.0;
  int qubit_count = 0;
  bool pure_branch = false;
};

namespace measures {

inline constexpr double kDefaultEpsilon = 1e-4;
// States with purity above 1 - kPureTol are treated as pure.
inline constexpr double kPureTol = 1e-8;

bool is_pure(const DensityMatrix& rho);

// All 2^(n-1) - 1 bipartitions; `left` is the smaller side (the one holding
// qubit 0 when the sides are equal). Single-qubit cuts come first.
std::vector<Bipartition> bipartitions(int qubit_count);

/// Wootters concurrence of a two-qubit state.
double wootters_concurrence(const DensityMatrix& rho2);

/// sqrt(2 - Tr rho_L^2 - Tr rho_R^2) for a pure state; throws InvalidArgument on mixed input.
double i_concurrence(const DensityMatrix& psi, const Bipartition& cut);

/// Sum over SO(d1) x SO(d2) generator pairs of the squared concurrence
/// max{0, l1 - l2 - l3 - l4}, where l_i are the descending square roots of the
/// nonzero eigenvalues of rho * (La (x) Lb) rho^* (La (x) Lb).
double lb_concurrence_sq(const DensityMatrix& rho, const Bipartition& cut);

/// Genuine three-way tangle of a pure three-qubit state: the residual
/// C^2_{A|BC} - C^2_{AB} - C^2_{AC}, averaged over the three focus qubits and
/// clamped at zero.
double tau3_pure(const DensityMatrix& psi);

/// Four-way tangle of a pure four-qubit state from the amplitude determinants
/// F_{ijkl} = a_{ijkl} a_{i'j'k'l'} - a_{ij'k'l'} a_{i'jkl} (primes flip the bit).
double tau4_pure(const DensityMatrix& psi);

/// (tau1 - tau4 - 3 tau2) / 3 for a pure four-qubit state, clamped at zero.
double tau3_of4_pure(const DensityMatrix& psi);

/// Global tangle: geometric mean of the per-bipartition entanglement over all
/// bipartitions. The per-cut term is the squared I-concurrence for pure input
/// and the lower bound otherwise. Cuts with two or more qubits on both sides
/// are capped at the geometric mean of the single-qubit cuts, which keeps the
/// value in [0, 1]; for n <= 3 every cut is single-qubit.
double tau1(const DensityMatrix& rho, double epsilon = kDefaultEpsilon);

/// Mean squared Wootters concurrence over all qubit pairs.
double tau2(const DensityMatrix& rho);

/// Mean over qubit triples of the averaged lower bounds of the reduced
/// three-qubit state's three bipartitions.
double tau3_mixed(const DensityMatrix& rho);

/// Mean lower bound over the seven bipartitions of four qubits (cut terms
/// capped as in tau1).
double tau4_mixed(const DensityMatrix& rho);

/// Every tangle for a 2-, 3- or 4-qubit state; pure inputs use the pure-state
/// forms for tau3/tau4, mixed inputs the lower-bound forms.
TangleVector tangle_vector(const DensityMatrix& rho, double epsilon = kDefaultEpsilon);

}  // namespace measures
}  // namespace entc
