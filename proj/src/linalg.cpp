#include "entc/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "entc/errors.hpp"

namespace entc::linalg {

namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
}

void require_qubit_dim(Eigen::Index dim, int qubit_count, const char* who) {
  if (qubit_count < 0 || qubit_count > 30 || dim != (Eigen::Index{1} << qubit_count)) {
    throw InvalidArgument(std::string(who) + ": dimension " + std::to_string(dim) +
                          " does not match " + std::to_string(qubit_count) + " qubits");
  }
}

// Bit position (from the least significant end) of qubit q in an n-qubit index.
constexpr int bit_of(int q, int n) { return n - 1 - q; }

std::vector<int> check_order(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) throw InvalidArgument("permute_qubits: order has wrong length");
  std::vector<int> seen(n, 0);
  for (int q : order) {
    if (q < 0 || q >= n || seen[q]++) throw InvalidArgument("permute_qubits: order is not a permutation");
  }
  return {order.begin(), order.end()};
}

// Maps every new basis index to the old index under the given qubit order.
std::vector<Eigen::Index> permutation_map(std::span<const int> order, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<Eigen::Index> old_of_new(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index old = 0;
    for (int k = 0; k < n; ++k) {
      if ((idx >> bit_of(k, n)) & 1) old |= Eigen::Index{1} << bit_of(order[k], n);
    }
    old_of_new[idx] = old;
  }
  return old_of_new;
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

int qubit_count_for_dim(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<unsigned long long>(dim))) {
    throw InvalidArgument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int qubit_count, std::span<const int> keep) {
  require_square(rho, "partial_trace");
  require_qubit_dim(rho.rows(), qubit_count, "partial_trace");
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");

  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.front() < 0 ||
      kept.back() >= qubit_count) {
    throw InvalidArgument("partial_trace: keep must be distinct qubit indices in [0, n)");
  }
  if (static_cast<int>(kept.size()) == qubit_count) return rho;

  std::vector<int> traced;
  for (int q = 0, k = 0; q < qubit_count; ++q) {
    if (k < static_cast<int>(kept.size()) && kept[k] == q) {
      ++k;
    } else {
      traced.push_back(q);
    }
  }

  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  auto expand = [&](Eigen::Index k_idx, Eigen::Index t_idx) {
    Eigen::Index full = 0;
    for (int j = 0; j < nk; ++j) {
      if ((k_idx >> bit_of(j, nk)) & 1) full |= Eigen::Index{1} << bit_of(kept[j], qubit_count);
    }
    for (int j = 0; j < nt; ++j) {
      if ((t_idx >> bit_of(j, nt)) & 1) full |= Eigen::Index{1} << bit_of(traced[j], qubit_count);
    }
    return full;
  };

  const Eigen::Index dk = Eigen::Index{1} << nk;
  const Eigen::Index dt = Eigen::Index{1} << nt;
  std::vector<Eigen::Index> index(dk * dt);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index t = 0; t < dt; ++t) index[a * dt + t] = expand(a, t);

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex s{0.0, 0.0};
      for (Eigen::Index t = 0; t < dt; ++t) s += rho(index[a * dt + t], index[b * dt + t]);
      out(a, b) = s;
    }
  }
  return out;
}

ComplexMatrix permute_qubits(const ComplexMatrix& rho, int qubit_count, std::span<const int> order) {
  require_square(rho, "permute_qubits");
  require_qubit_dim(rho.rows(), qubit_count, "permute_qubits");
  const auto ord = check_order(order, qubit_count);
  const auto old_of_new = permutation_map(ord, qubit_count);
  const Eigen::Index dim = rho.rows();
  ComplexMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) out(i, j) = rho(old_of_new[i], old_of_new[j]);
  return out;
}

ComplexVector permute_qubits(const ComplexVector& psi, int qubit_count, std::span<const int> order) {
  require_qubit_dim(psi.size(), qubit_count, "permute_qubits");
  const auto ord = check_order(order, qubit_count);
  const auto old_of_new = permutation_map(ord, qubit_count);
  ComplexVector out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) out(i) = psi(old_of_new[i]);
  return out;
}

double max_asymmetry(const ComplexMatrix& h) {
  require_square(h, "max_asymmetry");
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> herm_eigvals(const ComplexMatrix& h) {
  require_square(h, "herm_eigvals");
  if (h.size() == 0) return {};
  const double asym = max_asymmetry(h);
  if (!(asym <= kHermitianTol)) {
    throw InvalidArgument("herm_eigvals: matrix is not Hermitian (max |h - h^H| = " +
                          std::to_string(asym) + ")");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>{});
  return out;
}

std::vector<Complex> general_eigvals(const ComplexMatrix& m) {
  require_square(m, "general_eigvals");
  if (m.size() == 0) return {};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("general_eigvals: eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  require_square(rho, "psd_sqrt");
  const double asym = max_asymmetry(rho);
  if (!(asym <= kHermitianTol)) {
    throw InvalidArgument("psd_sqrt: matrix is not Hermitian (max |h - h^H| = " + std::to_string(asym) +
                          ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()));
  Eigen::VectorXd ev = solver.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -kPsdClamp) {
    throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(ev.minCoeff()) + " below -1e-9",
                      ev.minCoeff());
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const auto& v = solver.eigenvectors();
  return v * ev.asDiagonal() * v.adjoint();
}

}  // namespace entc::linalg
