#pragma once

#include <string>
#include <vector>

#include "entc/states.hpp"

namespace testing {

// Normalized equal superposition of computational basis kets.
inline entc::DensityMatrix ket(const std::vector<std::string>& terms, const std::vector<double>& signs = {}) {
  const int n = static_cast<int>(terms.front().size());
  entc::ComplexVector psi = entc::ComplexVector::Zero(Eigen::Index{1} << n);
  for (std::size_t i = 0; i < terms.size(); ++i) psi(std::stoi(terms[i], nullptr, 2)) += i < signs.size() ? signs[i] : 1.0;
  return entc::DensityMatrix::from_pure(psi);
}

inline entc::ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, entc::Rng& rng) {
  std::normal_distribution<double> g;
  entc::ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

}  // namespace testing
