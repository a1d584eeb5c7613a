#pragma once

// The well-known pure states and mixtures used to spot-check classifiers.

#include <string>
#include <vector>

#include "entc/classify.hpp"

namespace entc {

struct KnownState {
  std::string name;     // "psi1", "phi2", "rho3", "mu4", ...
  std::string formula;  // human-readable definition
  DensityMatrix state;
  ClassLabel reference;  // published class, with separable and k-separable merged
  bool mixed = false;
};

// psi1..psi7, phi1..phi5, chi1..chi6, then rho1..rho4, sigma1, mu1..mu5.
const std::vector<KnownState>& known_states();

}  // namespace entc
