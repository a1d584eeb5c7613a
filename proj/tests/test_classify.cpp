#include "doctest.h"

#include "entc/classify.hpp"
#include "entc/errors.hpp"
#include "helpers.hpp"

using namespace entc;
using testing::ket;

namespace {

TangleVector tv(int n, double t1, double t2, std::optional<double> t3 = {}, std::optional<double> t4 = {}) {
  TangleVector v;
  v.qubit_count = n;
  v.tau1 = t1;
  v.tau2 = t2;
  v.tau3 = t3;
  v.tau4 = t4;
  v.epsilon = 1e-4;
  return v;
}

std::string label_of(const DensityMatrix& rho) { return classify::label(measures::tangle_vector(rho)).name(); }

}  // namespace

TEST_CASE("decision tree on synthetic tangle vectors") {
  CHECK(classify::label(tv(2, 0.0, 0.0)).name() == "SEP");
  CHECK(classify::label(tv(2, 0.5, 0.5)).name() == "ENT");
  CHECK(classify::label(tv(3, 0.5, 0.2, 0.0)).name() == "[3]_2");
  CHECK(classify::label(tv(3, 0.5, 0.0, 0.9)).name() == "[3]_3");
  CHECK(classify::label(tv(3, 0.5, 0.0, 0.0)).name() == "[3]_3");
  CHECK(classify::label(tv(3, 0.5, 0.0, 0.0), true).name() == "SEP");
  CHECK(classify::label(tv(4, 0.5, 0.0, 0.3, 0.0)).name() == "[4]_3");
  CHECK(classify::label(tv(4, 0.5, 0.0, 0.0, 0.7)).name() == "[4]_4");
  CHECK(classify::label(tv(4, 0.5, 0.1, 0.3, 0.7)).name() == "[4]_2");
  CHECK(classify::label(tv(4, 5e-5, 0.2, 0.3, 0.7)).name() == "SEP");
}

TEST_CASE("thresholds are strict") {
  CHECK(classify::label(tv(2, 1e-4, 1e-4)).name() == "SEP");
  CHECK(classify::label(tv(2, 1.0001e-4, 1e-4)).name() == "SEP");
  CHECK(classify::label(tv(2, 2e-4, 2e-4)).name() == "ENT");
}

TEST_CASE("labels of representative states") {
  CHECK(label_of(ket({"00", "11"})) == "ENT");
  CHECK(label_of(ket({"00", "01"})) == "SEP");
  CHECK(label_of(ket({"000", "111"})) == "[3]_3");
  CHECK(label_of(ket({"001", "010", "100"})) == "[3]_2");
  CHECK(label_of(ket({"000", "011"})) == "SEP");
  CHECK(label_of(ket({"0000", "1111"})) == "[4]_4");
  CHECK(label_of(ket({"0001", "0010", "0100", "1000"})) == "[4]_2");
  CHECK(label_of(ket({"0000", "0111", "1011", "1101", "1110"})) == "[4]_3");
  CHECK(label_of(ket({"0000", "0011"})) == "SEP");
}

TEST_CASE("class names and indices") {
  CHECK(class_count(2) == 2);
  CHECK(class_count(4) == 4);
  CHECK(class_names(3) == std::vector<std::string>{"SEP", "[3]_2", "[3]_3"});
  CHECK(class_names(4).back() == "[4]_4");
  CHECK(parse_label("[4]_3", 4).index() == 2);
  CHECK(parse_label("ENT", 2).index() == 1);
  CHECK_THROWS_AS(parse_label("[4]_4", 3), InvalidArgument);
  CHECK_THROWS_AS(ClassLabel::make(ClassKind::ClassN3, 2), InvalidArgument);
  CHECK(ClassLabel::from_index(3, 4) == ClassLabel::make(ClassKind::ClassN4, 4));
}
