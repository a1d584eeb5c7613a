#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entc/known_states.hpp"
#include "entc/mlp.hpp"

namespace entc::eval {

/// counts[i][j]: records of true class i predicted as class j.
struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::vector<std::uint64_t>> counts;

  explicit ConfusionMatrix(std::vector<std::string> names = {});
  std::size_t size() const { return class_names.size(); }
  std::uint64_t total() const;
  std::uint64_t row_sum(std::size_t i) const;
  std::uint64_t column_sum(std::size_t j) const;
  void add(int truth, int predicted);
};

/// Confusion matrix of a model over a labeled set. Throws InvalidArgument if
/// the set is empty or its classes differ from the model's.
ConfusionMatrix confusion(const mlp::MlpModel& model, const dataset::Dataset& data, int threads = 1);

// Throws InvalidArgument on an empty matrix.
double accuracy(const ConfusionMatrix& cm);
// nullopt when nothing was predicted as class i.
std::optional<double> precision(const ConfusionMatrix& cm, std::size_t i);
// nullopt when class i has no records.
std::optional<double> recall(const ConfusionMatrix& cm, std::size_t i);

// {confusion, accuracy, per_class_precision, n_test}; undefined precision is "n/a".
std::string report_json(const ConfusionMatrix& cm);
std::string pretty_table(const ConfusionMatrix& cm);

struct VerifyRow {
  std::string name;
  std::string formula;
  int qubit_count = 0;
  bool mixed = false;
  ClassLabel reference;
  ClassLabel truth;  // tangle labeler
  std::optional<ClassLabel> prediction;
  double probability = 0.0;
  std::string model_used;  // "pure", "mixed" or "" when skipped

  bool truth_matches_reference() const { return truth == reference; }
  bool prediction_matches() const { return prediction && *prediction == truth; }
};

/// Models keyed by qubit count. Pure rows use the pure model and mixtures the
/// mixed model, each falling back to the other kind; a row with neither is
/// returned without a prediction.
struct ModelSet {
  std::map<int, mlp::MlpModel> pure;
  std::map<int, mlp::MlpModel> mixed;
};

std::vector<VerifyRow> verify_known_states(const ModelSet& models, double epsilon = measures::kDefaultEpsilon);

std::string verify_table(const std::vector<VerifyRow>& rows);
std::string verify_json(const std::vector<VerifyRow>& rows);

}  // namespace entc::eval
