#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entc/measures.hpp"

namespace entc {

enum class ClassKind : std::uint8_t {
  SeparableOrKSep = 0,
  ClassN2 = 1,  // [N]_2 (for N = 2: entangled)
  ClassN3 = 2,  // [N]_3, N >= 3
  ClassN4 = 3,  // [4]_4
};

struct ClassLabel {
  ClassKind kind = ClassKind::SeparableOrKSep;
  int qubit_count = 2;

  // Throws InvalidArgument for kinds that do not exist at this qubit count.
  static ClassLabel make(ClassKind kind, int qubit_count);
  static ClassLabel from_index(int index, int qubit_count) {
    return make(static_cast<ClassKind>(index), qubit_count);
  }

  int index() const { return static_cast<int>(kind); }
  // "SEP", "ENT" (two qubits) or "[N]_k".
  std::string name() const;

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

// Number of classes at a qubit count: 2, 3 or 4.
int class_count(int qubit_count);
// Names of all classes in index order.
std::vector<std::string> class_names(int qubit_count);
// Parses a name produced by ClassLabel::name(); throws InvalidArgument otherwise.
ClassLabel parse_label(const std::string& name, int qubit_count);

namespace classify {

/// Walks the partial-trace robustness tree: tau1 <= eps gives separable or
/// k-separable; otherwise the first of tau2, tau3 exceeding eps fixes the
/// class and [4]_4 is the remainder. For three qubits, [3]_3 is assigned
/// without testing tau3 unless `strict` is set, in which case a fully
/// entangled state with tau3 <= eps is reported as separable.
ClassLabel label(const TangleVector& tv, bool strict = false);

}  // namespace classify
}  // namespace entc
