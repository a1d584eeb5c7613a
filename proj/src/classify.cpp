#include "entc/classify.hpp"

#include "entc/errors.hpp"

namespace entc {

ClassLabel ClassLabel::make(ClassKind kind, int qubit_count) {
  if (qubit_count < 2 || qubit_count > 4) {
    throw InvalidArgument("class labels exist for 2 to 4 qubits, got " + std::to_string(qubit_count));
  }
  const int idx = static_cast<int>(kind);
  if (idx < 0 || idx >= class_count(qubit_count)) {
    throw InvalidArgument("class index " + std::to_string(idx) + " does not exist for " +
                          std::to_string(qubit_count) + " qubits");
  }
  return ClassLabel{kind, qubit_count};
}

std::string ClassLabel::name() const {
  switch (kind) {
    case ClassKind::SeparableOrKSep:
      return "SEP";
    case ClassKind::ClassN2:
      return qubit_count == 2 ? "ENT" : "[" + std::to_string(qubit_count) + "]_2";
    case ClassKind::ClassN3:
      return "[" + std::to_string(qubit_count) + "]_3";
    case ClassKind::ClassN4:
      return "[4]_4";
  }
  return "?";
}

int class_count(int qubit_count) {
  if (qubit_count < 2 || qubit_count > 4) {
    throw InvalidArgument("class_count: unsupported qubit count " + std::to_string(qubit_count));
  }
  return qubit_count;
}

std::vector<std::string> class_names(int qubit_count) {
  std::vector<std::string> names;
  for (int i = 0; i < class_count(qubit_count); ++i) names.push_back(ClassLabel::from_index(i, qubit_count).name());
  return names;
}

ClassLabel parse_label(const std::string& name, int qubit_count) {
  const auto names = class_names(qubit_count);
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (names[i] == name) return ClassLabel::from_index(i, qubit_count);
  }
  throw InvalidArgument("unknown class name '" + name + "' for " + std::to_string(qubit_count) + " qubits");
}

namespace classify {

ClassLabel label(const TangleVector& tv, bool strict) {
  const int n = tv.qubit_count;
  const double eps = tv.epsilon;
  auto make = [n](ClassKind k) { return ClassLabel::make(k, n); };

  if (tv.tau1 <= eps) return make(ClassKind::SeparableOrKSep);
  if (tv.tau2 > eps) return make(ClassKind::ClassN2);
  if (n == 2) return make(ClassKind::SeparableOrKSep);
  if (n == 3) {
    if (strict && !(tv.tau3.value_or(0.0) > eps)) return make(ClassKind::SeparableOrKSep);
    return make(ClassKind::ClassN3);
  }
  if (tv.tau3.value_or(0.0) > eps) return make(ClassKind::ClassN3);
  return make(ClassKind::ClassN4);
}

}  // namespace classify
}  // namespace entc
