#include "entc/known_states.hpp"

#include <cmath>
#include <initializer_list>

namespace entc {

namespace {

// Equal superposition of computational basis kets given as bit strings.
DensityMatrix ket(std::initializer_list<const char*> terms, std::initializer_list<double> signs = {}) {
  const int n = static_cast<int>(std::string(*terms.begin()).size());
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << n);
  auto s = signs.begin();
  for (const char* t : terms) {
    const double sign = s != signs.end() ? *s++ : 1.0;
    psi(std::stoi(t, nullptr, 2)) += sign;
  }
  return DensityMatrix::from_pure(psi);
}

DensityMatrix mix(double w, const DensityMatrix& a, const DensityMatrix& b) {
  const std::vector<double> weights{w, 1.0 - w};
  const std::vector<DensityMatrix> states{a, b};
  return mixture(weights, states);
}

std::vector<KnownState> build() {
  using K = ClassKind;
  auto L = [](K k, int n) { return ClassLabel::make(k, n); };
  const auto psi1 = ket({"00", "11"});
  const auto psi2 = ket({"01", "10"});
  const auto psi3 = ket({"00", "11"}, {1, -1});
  const auto psi4 = ket({"01", "10"}, {1, -1});
  const auto psi5 = ket({"00", "01"});
  const auto psi6 = ket({"10", "11"});
  const auto psi7 = ket({"00", "01", "10", "11"});
  const auto phi1 = ket({"000", "111"});
  const auto phi2 = ket({"001", "010", "100"});
  const auto phi3 = ket({"110", "101", "011"});
  const auto phi4 = ket({"010", "001", "011"});
  const auto phi5 = ket({"000", "001"});
  const auto chi1 = ket({"0000", "1111"});
  const auto chi2 = ket({"0001", "0010", "0100", "1000"});
  const auto chi3 = ket({"1110", "1101", "1011", "0111"});
  const auto chi4 = ket({"0000", "0111", "1011", "1101", "1110"});
  const auto chi5 = ket({"1000", "0100", "0010", "0001", "1111"});
  const auto chi6 = ket({"0000", "0011", "0010", "0001"});

  return {
      {"psi1", "(|00>+|11>)/sqrt2", psi1, L(K::ClassN2, 2), false},
      {"psi2", "(|01>+|10>)/sqrt2", psi2, L(K::ClassN2, 2), false},
      {"psi3", "(|00>-|11>)/sqrt2", psi3, L(K::ClassN2, 2), false},
      {"psi4", "(|01>-|10>)/sqrt2", psi4, L(K::ClassN2, 2), false},
      {"psi5", "(|00>+|01>)/sqrt2", psi5, L(K::SeparableOrKSep, 2), false},
      {"psi6", "(|10>+|11>)/sqrt2", psi6, L(K::SeparableOrKSep, 2), false},
      {"psi7", "(|00>+|01>+|10>+|11>)/2", psi7, L(K::SeparableOrKSep, 2), false},
      {"phi1", "(|000>+|111>)/sqrt2", phi1, L(K::ClassN3, 3), false},
      {"phi2", "(|001>+|010>+|100>)/sqrt3", phi2, L(K::ClassN2, 3), false},
      {"phi3", "(|110>+|101>+|011>)/sqrt3", phi3, L(K::ClassN2, 3), false},
      {"phi4", "(|010>+|001>+|011>)/sqrt3", phi4, L(K::SeparableOrKSep, 3), false},
      {"phi5", "(|000>+|001>)/sqrt2", phi5, L(K::SeparableOrKSep, 3), false},
      {"chi1", "(|0000>+|1111>)/sqrt2", chi1, L(K::ClassN4, 4), false},
      {"chi2", "(|0001>+|0010>+|0100>+|1000>)/2", chi2, L(K::ClassN2, 4), false},
      {"chi3", "(|1110>+|1101>+|1011>+|0111>)/2", chi3, L(K::ClassN2, 4), false},
      {"chi4", "(|0000>+|0111>+|1011>+|1101>+|1110>)/sqrt5", chi4, L(K::ClassN3, 4), false},
      {"chi5", "(|1000>+|0100>+|0010>+|0001>+|1111>)/sqrt5", chi5, L(K::ClassN3, 4), false},
      {"chi6", "(|0000>+|0011>+|0010>+|0001>)/2", chi6, L(K::SeparableOrKSep, 4), false},
      {"rho1", "0.5 psi1 + 0.5 psi3", mix(0.5, psi1, psi3), L(K::SeparableOrKSep, 2), true},
      {"rho2", "0.8 psi1 + 0.2 psi3", mix(0.8, psi1, psi3), L(K::ClassN2, 2), true},
      {"rho3", "0.5 psi2 + 0.5 psi6", mix(0.5, psi2, psi6), L(K::SeparableOrKSep, 2), true},
      {"rho4", "0.8 psi2 + 0.2 psi6", mix(0.8, psi2, psi6), L(K::ClassN2, 2), true},
      {"sigma1", "0.8 phi1 + 0.2 phi3", mix(0.8, phi1, phi3), L(K::ClassN3, 3), true},
      {"mu1", "0.5 chi1 + 0.5 chi3", mix(0.5, chi1, chi3), L(K::ClassN4, 4), true},
      {"mu2", "0.2 chi2 + 0.8 chi4", mix(0.2, chi2, chi4), L(K::ClassN3, 4), true},
      {"mu3", "0.8 chi6 + 0.2 chi5", mix(0.8, chi6, chi5), L(K::SeparableOrKSep, 4), true},
      {"mu4", "0.8 chi1 + 0.2 chi3", mix(0.8, chi1, chi3), L(K::ClassN4, 4), true},
      {"mu5", "0.8 chi5 + 0.2 chi2", mix(0.8, chi5, chi2), L(K::ClassN3, 4), true},
  };
}

}  // namespace

const std::vector<KnownState>& known_states() {
  static const std::vector<KnownState> table = build();
  return table;
}

}  // namespace entc
