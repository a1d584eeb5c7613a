#pragma once

// Dense complex kernels for states of at most a handful of qubits.
//
// Qubit convention: qubit 0 is the leftmost ket factor, i.e. the most
// significant bit of a computational-basis index. |q0 q1 ... q_{n-1}>
// has index sum_k q_k * 2^(n-1-k).

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace entc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

namespace linalg {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdClamp = 1e-9;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Number of qubits n such that dim == 2^n; throws InvalidArgument otherwise.
int qubit_count_for_dim(Eigen::Index dim);

// Reduced state on `keep` (qubit indices, any order; result follows ascending order).
ComplexMatrix partial_trace(const ComplexMatrix& rho, int qubit_count, std::span<const int> keep);

// Reorders tensor factors: new qubit k is old qubit order[k].
ComplexMatrix permute_qubits(const ComplexMatrix& rho, int qubit_count, std::span<const int> order);
ComplexVector permute_qubits(const ComplexVector& psi, int qubit_count, std::span<const int> order);

// max_{ij} |h_ij - conj(h_ji)|
double max_asymmetry(const ComplexMatrix& h);

/// Real eigenvalues of a Hermitian matrix, descending.
std::vector<double> herm_eigvals(const ComplexMatrix& h);

/// All eigenvalues of a square complex matrix, with multiplicity, unordered.
std::vector<Complex> general_eigvals(const ComplexMatrix& m);

/// Hermitian square root of a PSD matrix. Eigenvalues in [-1e-9, 0) are
/// clamped to zero; anything more negative raises NotPsdError.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

}  // namespace linalg
}  // namespace entc
