#pragma once

// Representative states written with coherent states |+-alpha>, encoded as
// qubits in the orthonormal even/odd cat basis {|+>, |->} (|+> = |0>,
// |-> = |1>). In that basis
//   |+-alpha> = sqrt(p+) |+> +- sqrt(p-) |->,   p+- = (1 +- exp(-2 alpha^2)) / 2,
// so <alpha|-alpha> = exp(-2 alpha^2).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "entc/classify.hpp"

namespace entc::coherent {

enum class Family { GHZ3, W3, GHZ4, W4, X4 };

struct CoherentParams {
  double alpha = 1.0;
  Family family = Family::GHZ3;
};

int family_qubits(Family family);
std::string family_name(Family family);  // "ghz3", "w3", ...
Family parse_family(const std::string& name);

// Superposed terms as bit strings; '0' stands for |alpha>, '1' for |-alpha>.
std::vector<std::string> family_terms(Family family);

// Closed-form normalization factor N(alpha) of the family.
double normalization_factor(Family family, double alpha);

// Encoded single-mode state |alpha> (sign = +1) or |-alpha> (sign = -1).
ComplexVector encoded_coherent(double alpha, int sign);

// Sum of the family's product terms before normalization.
ComplexVector raw_superposition(Family family, double alpha);

/// Normalized coherent-state representative. alpha must be >= 0; alpha == 0
/// is rejected for the W and X families, whose terms coincide there.
DensityMatrix build_representative(const CoherentParams& params);

// The same family with |alpha> -> |0>, |-alpha> -> |1>.
DensityMatrix build_computational(Family family);

/// b |GHZ3><GHZ3| + (1 - b) |W3><W3|, coherent when alpha is set.
DensityMatrix mix3(double b, std::optional<double> alpha = std::nullopt);

/// a GHZ4 + b W4 + c X mixture; the weights must sum to 1.
DensityMatrix mix4(double a, double b, double c, std::optional<double> alpha = std::nullopt);

struct CurveRow {
  std::string family;
  double param = 0.0;
  TangleVector tangles;
  ClassLabel label;
};

// Parsed "start:stop:count" grid; must be strictly increasing with >= 2 points.
std::vector<double> parse_grid(const std::string& spec);
void check_grid(const std::vector<double>& grid);

/// Curve for one token:
///   ghz3|w3|ghz4|w4|x4   sweep alpha over `grid`
///   mix3:B               sweep alpha for rho(B)
///   mix4:A/B/C           sweep alpha for the four-qubit mixture
///   mix3                 sweep b over `grid` at alpha = mix_alpha
std::vector<CurveRow> curve(const std::string& token, const std::vector<double>& grid, double epsilon,
                            double mix_alpha = 3.0);

inline constexpr const char* kCurveHeader = "family,param,tau1,tau2,tau3,tau4,label";

// CSV with kCurveHeader; 9 significant digits, empty cell for absent tangles.
void write_curves(const std::filesystem::path& out, const std::vector<CurveRow>& rows);

}  // namespace entc::coherent
