#include "entc/eval.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "entc/errors.hpp"
#include "entc/parallel.hpp"

namespace entc::eval {

namespace {

std::string fixed(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> names)
    : class_names(std::move(names)),
      counts(class_names.size(), std::vector<std::uint64_t>(class_names.size(), 0)) {}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
  return std::accumulate(counts.at(i).begin(), counts.at(i).end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t j) const {
  std::uint64_t s = 0;
  for (const auto& row : counts) s += row.at(j);
  return s;
}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 0 || predicted < 0 || static_cast<std::size_t>(truth) >= size() ||
      static_cast<std::size_t>(predicted) >= size()) {
    throw InvalidArgument("class index outside the confusion matrix");
  }
  ++counts[truth][predicted];
}

ConfusionMatrix confusion(const mlp::MlpModel& model, const dataset::Dataset& data, int threads) {
  if (data.records.empty()) throw InvalidArgument("test set is empty");
  const int n = static_cast<int>(data.header.qubit_count);
  if (model.qubit_count != n || model.class_names != class_names(n)) {
    throw InvalidArgument("model classes do not match the dataset (" + std::to_string(model.qubit_count) +
                          "-qubit model, " + std::to_string(n) + "-qubit data)");
  }
  std::vector<int> predicted(data.records.size());
  parallel_for(data.records.size(), threads, [&](std::size_t i) {
    predicted[i] = mlp::predict(model, data.records[i].state).label.index();
  });
  ConfusionMatrix cm(model.class_names);
  for (std::size_t i = 0; i < predicted.size(); ++i) cm.add(data.records[i].label.index(), predicted[i]);
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t t = cm.total();
  if (t == 0) throw InvalidArgument("accuracy of an empty confusion matrix");
  std::uint64_t diag = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) diag += cm.counts[i][i];
  return static_cast<double>(diag) / static_cast<double>(t);
}

std::optional<double> precision(const ConfusionMatrix& cm, std::size_t i) {
  const std::uint64_t col = cm.column_sum(i);
  if (col == 0) return std::nullopt;
  return static_cast<double>(cm.counts[i][i]) / static_cast<double>(col);
}

std::optional<double> recall(const ConfusionMatrix& cm, std::size_t i) {
  const std::uint64_t row = cm.row_sum(i);
  if (row == 0) return std::nullopt;
  return static_cast<double>(cm.counts[i][i]) / static_cast<double>(row);
}

std::string report_json(const ConfusionMatrix& cm) {
  nlohmann::json j;
  j["class_names"] = cm.class_names;
  j["confusion"] = cm.counts;
  j["accuracy"] = accuracy(cm);
  nlohmann::json prec = nlohmann::json::object();
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const auto p = precision(cm, i);
    prec[cm.class_names[i]] = p ? nlohmann::json(*p) : nlohmann::json("n/a");
  }
  j["per_class_precision"] = prec;
  j["n_test"] = cm.total();
  return j.dump(2);
}

std::string pretty_table(const ConfusionMatrix& cm) {
  std::ostringstream os;
  os << pad("true \\ pred", 12);
  for (const auto& name : cm.class_names) os << pad(name, 9);
  os << "recall\n";
  for (std::size_t i = 0; i < cm.size(); ++i) {
    os << pad(cm.class_names[i], 12);
    for (std::size_t j = 0; j < cm.size(); ++j) os << pad(std::to_string(cm.counts[i][j]), 9);
    const auto r = recall(cm, i);
    os << (r ? fixed(*r, 4) : "n/a") << '\n';
  }
  os << pad("precision", 12);
  for (std::size_t j = 0; j < cm.size(); ++j) {
    const auto p = precision(cm, j);
    os << pad(p ? fixed(*p, 4) : "n/a", 9);
  }
  os << "\naccuracy " << fixed(accuracy(cm), 4) << " over " << cm.total() << " records\n";
  return os.str();
}

std::vector<VerifyRow> verify_known_states(const ModelSet& models, double epsilon) {
  std::vector<VerifyRow> rows;
  for (const auto& ks : known_states()) {
    VerifyRow row;
    row.name = ks.name;
    row.formula = ks.formula;
    row.qubit_count = ks.state.qubit_count();
    row.mixed = ks.mixed;
    row.reference = ks.reference;
    row.truth = classify::label(measures::tangle_vector(ks.state, epsilon));

    const auto& first = ks.mixed ? models.mixed : models.pure;
    const auto& second = ks.mixed ? models.pure : models.mixed;
    const mlp::MlpModel* model = nullptr;
    if (auto it = first.find(row.qubit_count); it != first.end()) {
      model = &it->second;
      row.model_used = ks.mixed ? "mixed" : "pure";
    } else if (auto it2 = second.find(row.qubit_count); it2 != second.end()) {
      model = &it2->second;
      row.model_used = ks.mixed ? "pure" : "mixed";
    }
    if (model) {
      const auto p = mlp::predict(*model, ks.state);
      row.prediction = p.label;
      row.probability = p.probability;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string verify_table(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  os << pad("state", 8) << pad("definition", 48) << pad("reference", 11) << pad("labeler", 9)
     << pad("model", 9) << "match\n";
  int agree = 0, correct = 0, predicted = 0;
  for (const auto& r : rows) {
    os << pad(r.name, 8) << pad(r.formula, 48) << pad(r.reference.name(), 11)
       << pad(r.truth.name() + (r.truth_matches_reference() ? "" : "*"), 9);
    if (r.prediction) {
      ++predicted;
      os << pad(r.prediction->name(), 9) << (r.prediction_matches() ? "yes" : "no");
      correct += r.prediction_matches();
    } else {
      os << pad("-", 9) << "skipped (no " + std::to_string(r.qubit_count) + "-qubit model)";
    }
    agree += r.truth_matches_reference();
    os << '\n';
  }
  os << "labeler agrees with reference on " << agree << "/" << rows.size() << " rows (* marks a difference)\n";
  os << "model matches labeler on " << correct << "/" << predicted << " evaluated rows\n";
  return os.str();
}

std::string verify_json(const std::vector<VerifyRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"state", r.name},
                     {"definition", r.formula},
                     {"n_qubits", r.qubit_count},
                     {"mixed", r.mixed},
                     {"reference", r.reference.name()},
                     {"truth", r.truth.name()},
                     {"truth_matches_reference", r.truth_matches_reference()}};
    if (r.prediction) {
      j["prediction"] = r.prediction->name();
      j["probability"] = r.probability;
      j["match"] = r.prediction_matches();
      j["model"] = r.model_used;
    } else {
      j["prediction"] = nullptr;
      j["skipped"] = "no " + std::to_string(r.qubit_count) + "-qubit model";
    }
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace entc::eval
