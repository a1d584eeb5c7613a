#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "entc/coherent.hpp"
#include "entc/errors.hpp"
#include "oracles.hpp"

using namespace entc;
using namespace entc::coherent;

namespace {

const Family kAll[] = {Family::GHZ3, Family::W3, Family::GHZ4, Family::W4, Family::X4};

}

TEST_CASE("encoded coherent states have the right overlap") {
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const auto plus = encoded_coherent(a, +1), minus = encoded_coherent(a, -1);
    CHECK(plus.norm() == doctest::Approx(1.0));
    CHECK(plus.dot(minus).real() == doctest::Approx(std::exp(-2 * a * a)));
  }
}

TEST_CASE("closed-form normalization matches the numeric norm") {
  for (Family f : kAll) {
    for (double a : {0.2, 0.7, 1.3, 3.0}) {
      const double numeric = 1.0 / raw_superposition(f, a).norm();
      CHECK(normalization_factor(f, a) == doctest::Approx(numeric).epsilon(1e-12));
    }
  }
}

TEST_CASE("large alpha approaches the Hadamard-rotated computational family") {
  // |+-alpha> tends to (|0> +- |1>) / sqrt(2).
  ComplexMatrix h1(2, 2);
  h1 << 1.0, 1.0, 1.0, -1.0;
  h1 /= std::sqrt(2.0);
  for (Family f : kAll) {
    const int n = family_qubits(f);
    ComplexMatrix h = h1;
    for (int q = 1; q < n; ++q) h = oracle::kron(h, h1);
    const auto rep = build_representative({6.0, f});
    const ComplexMatrix comp = h * build_computational(f).matrix() * h.adjoint();
    CHECK((rep.matrix() - comp).norm() < 1e-9);
  }
}

TEST_CASE("alpha = 0 is rejected where the terms coincide") {
  CHECK_THROWS_AS(build_representative({0.0, Family::W3}), InvalidArgument);
  CHECK_THROWS_AS(build_representative({0.0, Family::X4}), InvalidArgument);
  CHECK_THROWS_AS(build_representative({-1.0, Family::GHZ3}), InvalidArgument);
  CHECK_NOTHROW(build_representative({0.0, Family::GHZ3}));
}

TEST_CASE("family names round-trip") {
  for (Family f : kAll) CHECK(parse_family(family_name(f)) == f);
  CHECK(family_qubits(Family::X4) == 4);
  CHECK_THROWS_AS(parse_family("ghz5"), InvalidArgument);
}

TEST_CASE("ratios tau1 = 2 tau2 (W3) and 3 tau2 (W4) at large alpha") {
  const auto w3 = measures::tangle_vector(build_representative({3.0, Family::W3}));
  CHECK(w3.tau1 == doctest::Approx(2.0 * w3.tau2).epsilon(1e-6));
  const auto w4 = measures::tangle_vector(build_representative({3.0, Family::W4}));
  CHECK(w4.tau1 == doctest::Approx(3.0 * w4.tau2).epsilon(1e-6));
}

TEST_CASE("mixtures validate their weights") {
  CHECK_THROWS_AS(mix3(1.5), InvalidArgument);
  CHECK_THROWS_AS(mix4(0.5, 0.5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(mix4(-0.1, 0.6, 0.5), InvalidArgument);
  const auto m = mix3(0.4);
  CHECK(m.matrix()(0, 0).real() == doctest::Approx(0.2));
}

TEST_CASE("grids") {
  const auto g = parse_grid("0.1:3.0:30");
  CHECK(g.size() == 30);
  CHECK(g.front() == doctest::Approx(0.1));
  CHECK(g.back() == doctest::Approx(3.0));
  CHECK_THROWS_AS(parse_grid("1:2"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("1:2:1"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("2:1:5"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("a:b:c"), InvalidArgument);
  CHECK_THROWS_AS(check_grid({0.1, 0.1}), InvalidArgument);
}

TEST_CASE("GHZ3 curve loses its pair tangle once the coherent states separate") {
  const auto small = curve("ghz3", {0.5, 0.6}, measures::kDefaultEpsilon);
  CHECK(small[1].tangles.tau2 > 0.1);
  const auto rows = curve("ghz3", parse_grid("1.6:3.0:15"), measures::kDefaultEpsilon);
  REQUIRE(rows.size() == 15);
  for (const auto& r : rows) {
    CHECK(r.tangles.tau2 < measures::kDefaultEpsilon);
    CHECK(r.label.name() == "[3]_3");
  }
}

TEST_CASE("W3 curve stays [3]_2 and tau1 grows with alpha") {
  const auto rows = curve("w3", parse_grid("0.3:3.0:10"), measures::kDefaultEpsilon);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].label.name() == "[3]_2");
    if (i) CHECK(rows[i].tangles.tau1 >= rows[i - 1].tangles.tau1 - 1e-12);
  }
}

TEST_CASE("mix3 sweep flips from [3]_2 to [3]_3 near b = 0.29") {
  const auto rows = curve("mix3", parse_grid("0:1:101"), measures::kDefaultEpsilon, 3.0);
  double flip = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i - 1].label.name() == "[3]_2" && rows[i].label.name() == "[3]_3") flip = rows[i].param;
  CHECK(flip >= 0.25);
  CHECK(flip <= 0.35);
}

TEST_CASE("curve CSV layout") {
  const auto path = std::filesystem::temp_directory_path() / "entc_curve_test.csv";
  auto rows = curve("ghz4", parse_grid("2:3:2"), measures::kDefaultEpsilon);
  auto more = curve("w3", parse_grid("2:3:2"), measures::kDefaultEpsilon);
  rows.insert(rows.end(), more.begin(), more.end());
  write_curves(path, rows);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == kCurveHeader);
  std::getline(is, line);
  CHECK(line.rfind("ghz4,2,", 0) == 0);
  CHECK(line.substr(line.size() - 6) == ",[4]_4");
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.find(",,[3]_2") != std::string::npos);  // no tau4 for three qubits
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_curves("/nonexistent-dir/x.csv", rows), IoError);
}

TEST_CASE("curve tokens") {
  const auto grid = parse_grid("1:3:3");
  CHECK(curve("mix4:1/1/1", grid, 1e-4).size() == 3);
  CHECK(curve("mix3:0.5", grid, 1e-4).size() == 3);
  CHECK_THROWS_AS(curve("mix4:1/1", grid, 1e-4), InvalidArgument);
  CHECK_THROWS_AS(curve("bogus", grid, 1e-4), InvalidArgument);
}
