#include "entc/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "entc/errors.hpp"

namespace entc {

Bipartition Bipartition::from_left(std::vector<int> left, int qubit_count) {
  std::sort(left.begin(), left.end());
  if (left.empty() || static_cast<int>(left.size()) >= qubit_count) {
    throw InvalidArgument("bipartition sides must both be nonempty");
  }
  if (left.front() < 0 || left.back() >= qubit_count ||
      std::adjacent_find(left.begin(), left.end()) != left.end()) {
    throw InvalidArgument("bipartition has invalid qubit indices");
  }
  Bipartition cut;
  for (int q = 0; q < qubit_count; ++q) {
    (std::binary_search(left.begin(), left.end(), q) ? cut.left : cut.right).push_back(q);
  }
  return cut;
}

namespace measures {

namespace {

void require_pure(const DensityMatrix& rho, const char* who) {
  if (!is_pure(rho)) {
    throw InvalidArgument(std::string(who) + ": state is mixed (purity " + std::to_string(rho.purity()) +
                          "); use the lower-bound forms");
  }
}

void require_qubits(const DensityMatrix& rho, int lo, int hi, const char* who) {
  if (rho.qubit_count() < lo || rho.qubit_count() > hi) {
    throw InvalidArgument(std::string(who) + ": unsupported qubit count " +
                          std::to_string(rho.qubit_count()));
  }
}

double reduced_purity(const DensityMatrix& rho, const std::vector<int>& keep) {
  return linalg::partial_trace(rho.matrix(), rho.qubit_count(), keep).squaredNorm();
}

double i_concurrence_sq(const DensityMatrix& psi, const Bipartition& cut) {
  return std::max(0.0, 2.0 - reduced_purity(psi, cut.left) - reduced_purity(psi, cut.right));
}

DensityMatrix reduce(const DensityMatrix& rho, const std::vector<int>& keep) {
  return DensityMatrix::validate(linalg::partial_trace(rho.matrix(), rho.qubit_count(), keep),
                                 static_cast<int>(keep.size()), PurityKind::Unknown);
}

// max{0, l1 - l2 - l3 - l4} for square roots of (clamped) eigenvalues.
double concurrence_from_eigs(std::array<double, 4> ev) {
  for (auto& x : ev) x = std::sqrt(std::max(0.0, x));
  std::sort(ev.begin(), ev.end(), std::greater<>{});
  return std::max(0.0, ev[0] - ev[1] - ev[2] - ev[3]);
}

// Top eigenvector of a pure state's density matrix.
ComplexVector state_vector(const DensityMatrix& psi) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(psi.matrix());
  return solver.eigenvectors().col(psi.dim() - 1);
}

// Per-bipartition entanglement terms, in bipartitions() order.
std::vector<double> cut_terms(const DensityMatrix& rho, const std::vector<Bipartition>& cuts, bool pure) {
  std::vector<double> terms;
  terms.reserve(cuts.size());
  for (const auto& cut : cuts) terms.push_back(pure ? i_concurrence_sq(rho, cut) : lb_concurrence_sq(rho, cut));
  return terms;
}

// Replaces the terms of cuts with >= 2 qubits on both sides by
// min(term, geometric mean of single-qubit-cut terms).
std::vector<double> capped_terms(const std::vector<Bipartition>& cuts, std::vector<double> terms) {
  double log_sum = 0.0;
  int singles = 0;
  bool zero_single = false;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!cuts[i].single_qubit_cut()) continue;
    ++singles;
    if (terms[i] <= 0.0) {
      zero_single = true;
    } else {
      log_sum += std::log(terms[i]);
    }
  }
  const double cap = zero_single ? 0.0 : std::exp(log_sum / singles);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!cuts[i].single_qubit_cut()) terms[i] = std::min(terms[i], cap);
  }
  return terms;
}

double geometric_mean(const std::vector<double>& terms) {
  double log_sum = 0.0;
  for (double t : terms) {
    if (t <= 0.0) return 0.0;
    log_sum += std::log(t);
  }
  return std::exp(log_sum / static_cast<double>(terms.size()));
}

double tau1_from_terms(const std::vector<Bipartition>& cuts, const std::vector<double>& terms) {
  return std::min(1.0, geometric_mean(capped_terms(cuts, terms)));
}

double tau4_from_terms(const std::vector<Bipartition>& cuts, const std::vector<double>& terms) {
  const auto capped = capped_terms(cuts, terms);
  return std::accumulate(capped.begin(), capped.end(), 0.0) / static_cast<double>(capped.size());
}

}  // namespace

bool is_pure(const DensityMatrix& rho) { return rho.purity() > 1.0 - kPureTol; }

std::vector<Bipartition> bipartitions(int qubit_count) {
  if (qubit_count < 2) throw InvalidArgument("bipartitions: need at least two qubits");
  std::vector<Bipartition> out;
  for (int k = 1; 2 * k <= qubit_count; ++k) {
    std::vector<bool> pick(qubit_count, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      if (2 * k == qubit_count && !pick[0]) continue;
      std::vector<int> left;
      for (int q = 0; q < qubit_count; ++q)
        if (pick[q]) left.push_back(q);
      out.push_back(Bipartition::from_left(std::move(left), qubit_count));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

double wootters_concurrence(const DensityMatrix& rho2) {
  if (rho2.qubit_count() != 2) throw InvalidArgument("wootters_concurrence: state must have two qubits");
  const ComplexMatrix& rho = rho2.matrix();
  // (sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y); the flip matrix is real.
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix flipped = yy * rho.conjugate() * yy;
  const ComplexMatrix root = linalg::psd_sqrt(rho);
  ComplexMatrix r = root * flipped * root;
  r = 0.5 * (r + r.adjoint());
  const auto ev = linalg::herm_eigvals(r);
  return std::min(1.0, concurrence_from_eigs({ev[0], ev[1], ev[2], ev[3]}));
}

double i_concurrence(const DensityMatrix& psi, const Bipartition& cut) {
  require_pure(psi, "i_concurrence");
  return std::sqrt(i_concurrence_sq(psi, cut));
}

double lb_concurrence_sq(const DensityMatrix& rho, const Bipartition& cut) {
  const int n = rho.qubit_count();
  if (static_cast<int>(cut.left.size() + cut.right.size()) != n) {
    throw InvalidArgument("lb_concurrence_sq: bipartition does not cover the state");
  }
  std::vector<int> order(cut.left);
  order.insert(order.end(), cut.right.begin(), cut.right.end());
  const ComplexMatrix r = linalg::permute_qubits(rho.matrix(), n, order);
  const Eigen::Index d1 = Eigen::Index{1} << cut.left.size();
  const Eigen::Index d2 = Eigen::Index{1} << cut.right.size();
  auto at = [d2](Eigen::Index a, Eigen::Index b) { return a * d2 + b; };

  // La (x) Lb with La = E_ij - E_ji, Lb = E_kl - E_lk is the rank-4 sum
  // sum_r s_r |u_r><v_r|. The nonzero spectrum of rho A rho^* A then equals the
  // spectrum of the 4x4 product (V^T rho^* U)(V^T rho U).
  double total = 0.0;
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index j = i + 1; j < d1; ++j)
      for (Eigen::Index k = 0; k < d2; ++k)
        for (Eigen::Index l = k + 1; l < d2; ++l) {
          const std::array<Eigen::Index, 4> u{at(i, k), at(i, l), at(j, k), at(j, l)};
          const std::array<Eigen::Index, 4> v{at(j, l), at(j, k), at(i, l), at(i, k)};
          const std::array<double, 4> s{1.0, -1.0, -1.0, 1.0};
          Eigen::Matrix4cd p;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) p(a, b) = r(v[a], u[b]) * s[b];
          const Eigen::Matrix4cd m = p.conjugate() * p;
          Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
          const auto& ev = solver.eigenvalues();
          const double c = concurrence_from_eigs({ev(0).real(), ev(1).real(), ev(2).real(), ev(3).real()});
          total += c * c;
        }
  return total;
}

double tau3_pure(const DensityMatrix& psi) {
  require_qubits(psi, 3, 3, "tau3_pure");
  require_pure(psi, "tau3_pure");
  double sum = 0.0;
  for (int focus = 0; focus < 3; ++focus) {
    const int b = (focus + 1) % 3;
    const int c = (focus + 2) % 3;
    const double whole = i_concurrence_sq(psi, Bipartition::from_left({focus}, 3));
    const double cb = wootters_concurrence(reduce(psi, {std::min(focus, b), std::max(focus, b)}));
    const double cc = wootters_concurrence(reduce(psi, {std::min(focus, c), std::max(focus, c)}));
    sum += whole - cb * cb - cc * cc;
  }
  return std::clamp(sum / 3.0, 0.0, 1.0);
}

double tau4_pure(const DensityMatrix& psi) {
  require_qubits(psi, 4, 4, "tau4_pure");
  require_pure(psi, "tau4_pure");
  const ComplexVector a = state_vector(psi);
  // Bit i1 is the most significant (qubit 0).
  auto amp = [&a](int i1, int i2, int i3, int i4) { return a(8 * i1 + 4 * i2 + 2 * i3 + i4); };
  auto det = [&amp](int i1, int i2, int i3, int i4) {
    const int f1 = 1 - i1, f2 = 1 - i2, f3 = 1 - i3, f4 = 1 - i4;
    return amp(i1, i2, i3, i4) * amp(f1, f2, f3, f4) - amp(i1, f2, f3, f4) * amp(f1, i2, i3, i4);
  };
  // All four determinants follow the F_{00kl} pattern.
  const Complex inner = (det(0, 0, 0, 1) - det(0, 0, 0, 0)) + (det(0, 0, 1, 0) - det(0, 0, 1, 1));
  return std::clamp(4.0 * std::abs(inner * inner), 0.0, 1.0);
}

double tau3_of4_pure(const DensityMatrix& psi) {
  require_qubits(psi, 4, 4, "tau3_of4_pure");
  require_pure(psi, "tau3_of4_pure");
  return std::max(0.0, (tau1(psi) - tau4_pure(psi) - 3.0 * tau2(psi)) / 3.0);
}

double tau1(const DensityMatrix& rho, double /*epsilon*/) {
  require_qubits(rho, 2, 4, "tau1");
  const auto cuts = bipartitions(rho.qubit_count());
  return tau1_from_terms(cuts, cut_terms(rho, cuts, is_pure(rho)));
}

double tau2(const DensityMatrix& rho) {
  const int n = rho.qubit_count();
  if (n < 2) throw InvalidArgument("tau2: need at least two qubits");
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = wootters_concurrence(reduce(rho, {i, j}));
      sum += c * c;
      ++pairs;
    }
  return sum / pairs;
}

double tau3_mixed(const DensityMatrix& rho) {
  const int n = rho.qubit_count();
  if (n < 3) throw InvalidArgument("tau3_mixed: need at least three qubits");
  double sum = 0.0;
  int triples = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const DensityMatrix sub = n == 3 ? rho : reduce(rho, {i, j, k});
        double inner = 0.0;
        for (int focus = 0; focus < 3; ++focus) inner += lb_concurrence_sq(sub, Bipartition::from_left({focus}, 3));
        sum += inner / 3.0;
        ++triples;
      }
  return sum / triples;
}

double tau4_mixed(const DensityMatrix& rho) {
  require_qubits(rho, 4, 4, "tau4_mixed");
  const auto cuts = bipartitions(4);
  return tau4_from_terms(cuts, cut_terms(rho, cuts, false));
}

TangleVector tangle_vector(const DensityMatrix& rho, double epsilon) {
  require_qubits(rho, 2, 4, "tangle_vector");
  const int n = rho.qubit_count();
  TangleVector tv;
  tv.epsilon = epsilon;
  tv.qubit_count = n;
  tv.pure_branch = is_pure(rho);

  const auto cuts = bipartitions(n);
  const auto terms = cut_terms(rho, cuts, tv.pure_branch);
  tv.tau1 = tau1_from_terms(cuts, terms);
  tv.tau2 = tau2(rho);
  if (n == 3) {
    tv.tau3 = tv.pure_branch ? tau3_pure(rho) : tau3_mixed(rho);
  } else if (n == 4) {
    if (tv.pure_branch) {
      tv.tau4 = tau4_pure(rho);
      tv.tau3 = std::max(0.0, (tv.tau1 - *tv.tau4 - 3.0 * tv.tau2) / 3.0);
    } else {
      tv.tau3 = tau3_mixed(rho);
      tv.tau4 = tau4_from_terms(cuts, terms);
    }
  }
  return tv;
}

}  // namespace measures
}  // namespace entc
