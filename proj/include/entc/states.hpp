#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "entc/linalg.hpp"

namespace entc {

using Rng = std::mt19937_64;

// Independent deterministic stream for (seed, index); used so that record i of
// a dataset does not depend on how many records were drawn before it.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

enum class PurityKind : std::uint8_t { Pure = 0, Mixed = 1, Unknown = 2 };

/// A validated quantum state on n qubits: Hermitian, unit trace and positive
/// semidefinite, each to within the tolerances in linalg.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;

  /// Checks every invariant and returns the state, or throws StateError
  /// naming the first violated invariant. A matrix whose asymmetry is within
  /// tolerance is symmetrized as (m + m^H) / 2 first.
  static DensityMatrix validate(const ComplexMatrix& m, int qubit_count,
                                PurityKind kind = PurityKind::Unknown);

  /// |psi><psi| after normalizing psi.
  static DensityMatrix from_pure(const ComplexVector& psi);

  int qubit_count() const noexcept { return qubit_count_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  PurityKind purity_kind() const noexcept { return kind_; }
  double purity() const;

 private:
  DensityMatrix(ComplexMatrix m, int qubit_count, PurityKind kind)
      : mat_(std::move(m)), qubit_count_(qubit_count), kind_(kind) {}

  ComplexMatrix mat_;
  int qubit_count_;
  PurityKind kind_;
};

// U rho U^H, revalidated.
DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& unitary);

// Convex combination sum_i w_i rho_i; weights must be nonnegative and sum to 1.
DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states);

// Haar-random d x d unitary (QR of a Ginibre matrix with the R-diagonal phases removed).
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

// Normalized vector of i.i.d. standard complex Gaussians.
ComplexVector random_pure_vector(int qubit_count, Rng& rng);

DensityMatrix random_pure(int qubit_count, Rng& rng);

// Haar pure state on 2n qubits with the n ancilla qubits traced out.
DensityMatrix random_mixed(int qubit_count, Rng& rng);

// u_1 (x) ... (x) u_n with each u_i Haar on U(2).
ComplexMatrix random_local_unitary(int qubit_count, Rng& rng);

using Partition = std::vector<std::vector<int>>;

// Throws InvalidArgument unless the blocks partition {0..n-1}.
void check_partition(const Partition& partition, int qubit_count);

/// A product state across the blocks of `partition`. Blocks of two or more
/// qubits hold a random in-block pure state whose own tau1 exceeds epsilon;
/// single-qubit blocks hold a random pure or mixed qubit. The mixed variant is
/// a random convex mixture of 2-4 such products over the same partition.
DensityMatrix separable_sample(int qubit_count, const Partition& partition, PurityKind kind, Rng& rng,
                               double epsilon = 1e-4);

// Entries rounded to 6 decimals and hashed (FNV-1a); equal keys count as duplicates.
std::uint64_t dedup_key(const ComplexMatrix& m);

}  // namespace entc
