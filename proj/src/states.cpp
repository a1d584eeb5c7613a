#include "entc/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entc/errors.hpp"
#include "entc/measures.hpp"

namespace entc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_supported(int qubit_count, const char* who) {
  if (qubit_count < 1 || qubit_count > 4) {
    throw InvalidArgument(std::string(who) + ": qubit count must be in [1, 4], got " +
                          std::to_string(qubit_count));
  }
}

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

// Random probability vector, uniform on the simplex.
std::vector<double> dirichlet_weights(int count, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(count);
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

ComplexMatrix random_block_state(int block_size, PurityKind kind, Rng& rng, double epsilon) {
  if (block_size == 1) {
    if (kind == PurityKind::Pure) return random_pure(1, rng).matrix();
    return random_mixed(1, rng).matrix();
  }
  // Haar states are entangled with probability one; the loop only guards roundoff-level draws.
  for (;;) {
    auto block = random_pure(block_size, rng);
    if (measures::tau1(block, epsilon) > epsilon) return block.matrix();
  }
}

}  // namespace

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

DensityMatrix DensityMatrix::validate(const ComplexMatrix& m, int qubit_count, PurityKind kind) {
  if (qubit_count < 1 || qubit_count > 6 || m.rows() != m.cols() ||
      m.rows() != (Eigen::Index{1} << qubit_count)) {
    throw StateError(StateError::Kind::BadDimension, static_cast<double>(m.rows()),
                     "matrix of shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " is not 2^n x 2^n for n = " + std::to_string(qubit_count));
  }
  if (!m.allFinite()) {
    throw StateError(StateError::Kind::NotHermitian, std::nan(""), "matrix has non-finite entries");
  }
  const double asym = linalg::max_asymmetry(m);
  if (asym > linalg::kHermitianTol) {
    throw StateError(StateError::Kind::NotHermitian, asym,
                     "not Hermitian: max |m - m^H| = " + std::to_string(asym));
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  const double trace_err = std::abs(sym.trace().real() - 1.0);
  if (trace_err > kTraceTol) {
    throw StateError(StateError::Kind::BadTrace, trace_err,
                     "trace differs from 1 by " + std::to_string(trace_err));
  }
  const auto ev = linalg::herm_eigvals(sym);
  if (ev.back() < -linalg::kPsdClamp) {
    throw StateError(StateError::Kind::NotPsd, ev.back(),
                     "not positive semidefinite: eigenvalue " + std::to_string(ev.back()));
  }
  return DensityMatrix(std::move(sym), qubit_count, kind);
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const int n = linalg::qubit_count_for_dim(psi.size());
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("from_pure: zero or non-finite vector");
  const ComplexVector v = psi / norm;
  return validate(v * v.adjoint(), n, PurityKind::Pure);
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return mat_.squaredNorm();
}

DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& unitary) {
  if (unitary.rows() != rho.dim() || unitary.cols() != rho.dim()) {
    throw InvalidArgument("conjugate: unitary dimension does not match state");
  }
  return DensityMatrix::validate(unitary * rho.matrix() * unitary.adjoint(), rho.qubit_count(),
                                 rho.purity_kind());
}

DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states) {
  if (weights.size() != states.size() || states.empty()) {
    throw InvalidArgument("mixture: need matching nonempty weight and state lists");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture: weights do not sum to 1");
  const int n = states.front().qubit_count();
  ComplexMatrix acc = ComplexMatrix::Zero(states.front().dim(), states.front().dim());
  int nonzero = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].qubit_count() != n) throw InvalidArgument("mixture: qubit counts differ");
    if (weights[i] > 0.0) ++nonzero;
    acc += weights[i] * states[i].matrix();
  }
  PurityKind kind = PurityKind::Mixed;
  if (nonzero == 1) {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (weights[i] > 0.0) kind = states[i].purity_kind();
  }
  return DensityMatrix::validate(acc, n, kind);
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexVector random_pure_vector(int qubit_count, Rng& rng) {
  require_supported(qubit_count, "random_pure");
  ComplexVector v = ginibre(Eigen::Index{1} << qubit_count, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_pure(int qubit_count, Rng& rng) {
  return DensityMatrix::from_pure(random_pure_vector(qubit_count, rng));
}

DensityMatrix random_mixed(int qubit_count, Rng& rng) {
  require_supported(qubit_count, "random_mixed");
  const Eigen::Index d = Eigen::Index{1} << qubit_count;
  // Rows index the system, columns the ancilla; G G^H is the reduced state.
  const ComplexMatrix g = ginibre(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::validate(rho, qubit_count, PurityKind::Mixed);
}

ComplexMatrix random_local_unitary(int qubit_count, Rng& rng) {
  if (qubit_count < 1) throw InvalidArgument("random_local_unitary: need at least one qubit");
  ComplexMatrix u = random_unitary(2, rng);
  for (int q = 1; q < qubit_count; ++q) u = linalg::kron(u, random_unitary(2, rng));
  return u;
}

void check_partition(const Partition& partition, int qubit_count) {
  std::vector<int> seen(std::max(qubit_count, 0), 0);
  for (const auto& block : partition) {
    if (block.empty()) throw InvalidArgument("partition contains an empty block");
    for (int q : block) {
      if (q < 0 || q >= qubit_count) {
        throw InvalidArgument("partition index " + std::to_string(q) + " outside [0, " +
                              std::to_string(qubit_count) + ")");
      }
      if (seen[q]++) throw InvalidArgument("qubit " + std::to_string(q) + " appears in two blocks");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidArgument("partition does not cover every qubit");
  }
  if (partition.size() < 2) throw InvalidArgument("a separable partition needs at least two blocks");
}

DensityMatrix separable_sample(int qubit_count, const Partition& partition, PurityKind kind, Rng& rng,
                               double epsilon) {
  require_supported(qubit_count, "separable_sample");
  check_partition(partition, qubit_count);
  if (kind == PurityKind::Unknown) throw InvalidArgument("separable_sample: purity must be pure or mixed");

  // Tensor factors are laid out block by block; `order` then moves each
  // declared qubit to its own position.
  std::vector<int> concat;
  for (const auto& block : partition) concat.insert(concat.end(), block.begin(), block.end());
  std::vector<int> order(qubit_count);
  for (int pos = 0; pos < qubit_count; ++pos) order[concat[pos]] = pos;

  auto product = [&](PurityKind block_kind) {
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (const auto& block : partition) {
      acc = linalg::kron(acc, random_block_state(static_cast<int>(block.size()), block_kind, rng, epsilon));
    }
    return acc;
  };

  ComplexMatrix rho;
  if (kind == PurityKind::Pure) {
    rho = product(PurityKind::Pure);
  } else {
    std::uniform_int_distribution<int> count_dist(2, 4);
    const int terms = count_dist(rng);
    const auto w = dirichlet_weights(terms, rng);
    rho = ComplexMatrix::Zero(Eigen::Index{1} << qubit_count, Eigen::Index{1} << qubit_count);
    for (int t = 0; t < terms; ++t) rho += w[t] * product(PurityKind::Mixed);
  }
  rho = linalg::permute_qubits(rho, qubit_count, order);
  return DensityMatrix::validate(rho, qubit_count, kind);
}

std::uint64_t dedup_key(const ComplexMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      mix(std::llround(m(i, j).real() * 1e6));
      mix(std::llround(m(i, j).imag() * 1e6));
    }
  return h;
}

}  // namespace entc
