#include "entc/coherent.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "entc/errors.hpp"

namespace entc::coherent {

namespace {

struct FamilyInfo {
  Family family;
  const char* name;
  int qubits;
  std::vector<std::string> terms;
};

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> table{
      {Family::GHZ3, "ghz3", 3, {"000", "111"}},
      {Family::W3, "w3", 3, {"001", "010", "100"}},
      {Family::GHZ4, "ghz4", 4, {"0000", "1111"}},
      {Family::W4, "w4", 4, {"1000", "0100", "0010", "0001"}},
      {Family::X4, "x4", 4, {"0000", "1110", "1101", "1011", "0111"}},
  };
  return table;
}

const FamilyInfo& info(Family family) {
  for (const auto& f : families())
    if (f.family == family) return f;
  throw InvalidArgument("unknown family");
}

ComplexVector term_vector(const std::string& bits, const ComplexVector& plus, const ComplexVector& minus) {
  ComplexVector v = bits[0] == '0' ? plus : minus;
  for (std::size_t i = 1; i < bits.size(); ++i) {
    const ComplexVector& f = bits[i] == '0' ? plus : minus;
    ComplexVector next(v.size() * 2);
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      next(2 * a) = v(a) * f(0);
      next(2 * a + 1) = v(a) * f(1);
    }
    v = std::move(next);
  }
  return v;
}

std::string format_sig9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

int family_qubits(Family family) { return info(family).qubits; }
std::string family_name(Family family) { return info(family).name; }

Family parse_family(const std::string& name) {
  for (const auto& f : families())
    if (name == f.name) return f.family;
  throw InvalidArgument("unknown state family '" + name + "'");
}

std::vector<std::string> family_terms(Family family) { return info(family).terms; }

double normalization_factor(Family family, double alpha) {
  const double a2 = alpha * alpha;
  switch (family) {
    case Family::GHZ3:
      return 1.0 / std::sqrt(2.0 * (std::exp(-6.0 * a2) + 1.0));
    case Family::W3:
      return 1.0 / std::sqrt(3.0 * (2.0 * std::exp(-4.0 * a2) + 1.0));
    case Family::GHZ4:
      return 1.0 / std::sqrt(2.0 * (std::exp(-8.0 * a2) + 1.0));
    case Family::X4:
      return 1.0 / std::sqrt(5.0 + 8.0 * std::exp(-6.0 * a2) + 12.0 * std::exp(-4.0 * a2));
    case Family::W4:
      return 1.0 / std::sqrt(4.0 * (3.0 * std::exp(-4.0 * a2) + 1.0));
  }
  throw InvalidArgument("unknown family");
}

ComplexVector encoded_coherent(double alpha, int sign) {
  const double overlap = std::exp(-2.0 * alpha * alpha);
  ComplexVector v(2);
  v(0) = std::sqrt((1.0 + overlap) / 2.0);
  v(1) = (sign >= 0 ? 1.0 : -1.0) * std::sqrt((1.0 - overlap) / 2.0);
  return v;
}

ComplexVector raw_superposition(Family family, double alpha) {
  const ComplexVector plus = encoded_coherent(alpha, +1);
  const ComplexVector minus = encoded_coherent(alpha, -1);
  const auto& f = info(family);
  ComplexVector sum = ComplexVector::Zero(Eigen::Index{1} << f.qubits);
  for (const auto& t : f.terms) sum += term_vector(t, plus, minus);
  return sum;
}

DensityMatrix build_representative(const CoherentParams& params) {
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
    throw InvalidArgument("coherent amplitude must be finite and nonnegative");
  }
  if (params.alpha == 0.0 && params.family != Family::GHZ3 && params.family != Family::GHZ4) {
    throw InvalidArgument("alpha = 0 makes |alpha> = |-alpha>; the " + family_name(params.family) +
                          " superposition degenerates");
  }
  const ComplexVector psi = normalization_factor(params.family, params.alpha) *
                            raw_superposition(params.family, params.alpha);
  return DensityMatrix::from_pure(psi);
}

DensityMatrix build_computational(Family family) {
  const auto& f = info(family);
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << f.qubits);
  for (const auto& t : f.terms) psi(std::stoi(t, nullptr, 2)) += 1.0;
  return DensityMatrix::from_pure(psi);
}

namespace {

DensityMatrix pick(Family family, std::optional<double> alpha) {
  return alpha ? build_representative({*alpha, family}) : build_computational(family);
}

}  // namespace

DensityMatrix mix3(double b, std::optional<double> alpha) {
  if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("mix3: b must lie in [0, 1]");
  const std::vector<DensityMatrix> states{pick(Family::GHZ3, alpha), pick(Family::W3, alpha)};
  const std::vector<double> w{b, 1.0 - b};
  return mixture(w, states);
}

DensityMatrix mix4(double a, double b, double c, std::optional<double> alpha) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw InvalidArgument("mix4: weights must be nonnegative");
  if (std::abs(a + b + c - 1.0) >= 1e-12) throw InvalidArgument("mix4: weights must sum to 1");
  const std::vector<DensityMatrix> states{pick(Family::GHZ4, alpha), pick(Family::W4, alpha),
                                          pick(Family::X4, alpha)};
  // Renormalize exactly so that mixture() sees a unit sum.
  const double s = a + b + c;
  const std::vector<double> w{a / s, b / s, 1.0 - a / s - b / s};
  return mixture(w, states);
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw InvalidArgument("grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("grid must be strictly increasing");
}

std::vector<double> parse_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
    throw InvalidArgument("grid must look like start:stop:count, got '" + spec + "'");
  }
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    start = std::stod(a);
    stop = std::stod(b);
    count = std::stol(c);
  } catch (const std::exception&) {
    throw InvalidArgument("grid must look like start:stop:count, got '" + spec + "'");
  }
  if (count < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> grid(count);
  for (long i = 0; i < count; ++i) grid[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  check_grid(grid);
  return grid;
}

std::vector<CurveRow> curve(const std::string& token, const std::vector<double>& grid, double epsilon,
                            double mix_alpha) {
  check_grid(grid);
  std::vector<CurveRow> rows;
  auto push = [&](double param, const DensityMatrix& rho) {
    const auto tv = measures::tangle_vector(rho, epsilon);
    rows.push_back({token, param, tv, classify::label(tv)});
  };

  if (token == "mix3") {
    for (double b : grid) push(b, mix3(b, mix_alpha));
    return rows;
  }
  if (token.rfind("mix3:", 0) == 0) {
    const double b = std::stod(token.substr(5));
    for (double alpha : grid) push(alpha, mix3(b, alpha));
    return rows;
  }
  if (token.rfind("mix4:", 0) == 0) {
    std::stringstream ss(token.substr(5));
    std::string wa, wb, wc;
    if (!std::getline(ss, wa, '/') || !std::getline(ss, wb, '/') || !std::getline(ss, wc)) {
      throw InvalidArgument("mix4 token must look like mix4:A/B/C");
    }
    double a = std::stod(wa), b = std::stod(wb), c = std::stod(wc);
    const double s = a + b + c;
    if (!(s > 0.0)) throw InvalidArgument("mix4 weights must have a positive sum");
    a /= s, b /= s, c = 1.0 - a - b;
    for (double alpha : grid) push(alpha, mix4(a, b, std::max(0.0, c), alpha));
    return rows;
  }
  const Family family = parse_family(token);
  for (double alpha : grid) push(alpha, build_representative({alpha, family}));
  return rows;
}

void write_curves(const std::filesystem::path& out, const std::vector<CurveRow>& rows) {
  std::ofstream os(out, std::ios::binary);
  if (!os) throw IoError(out.string(), "cannot open curve output");
  os << kCurveHeader << '\n';
  for (const auto& r : rows) {
    os << r.family << ',' << format_sig9(r.param) << ',' << format_sig9(r.tangles.tau1) << ','
       << format_sig9(r.tangles.tau2) << ',' << (r.tangles.tau3 ? format_sig9(*r.tangles.tau3) : "") << ','
       << (r.tangles.tau4 ? format_sig9(*r.tangles.tau4) : "") << ',' << r.label.name() << '\n';
  }
  if (!os) throw IoError(out.string(), "write failed");
}

}  // namespace entc::coherent
