#include "entc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "entc/errors.hpp"

namespace entc::mlp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Column-wise softmax, shifted by the column max.
MatrixXd softmax_columns(const MatrixXd& z) {
  MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const VectorXd e = (z.col(c).array() - z.col(c).maxCoeff()).exp();
    out.col(c) = e / e.sum();
  }
  return out;
}

struct Activations {
  std::vector<MatrixXd> a;  // a[0] = input, a[L] = probabilities
  std::vector<MatrixXd> z;  // pre-activations of layers 1..L
};

Activations run(const MlpModel& m, const MatrixXd& x) {
  Activations act;
  act.a.push_back(x);
  const std::size_t layers = m.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    MatrixXd z = m.weights[l] * act.a.back();
    z.colwise() += m.biases[l];
    act.z.push_back(z);
    if (l + 1 < layers) {
      act.a.push_back(z.cwiseMax(0.0));
    } else {
      act.a.push_back(softmax_columns(z));
    }
  }
  return act;
}

double cross_entropy(const MatrixXd& probs, const std::vector<int>& y) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c) sum -= std::log(std::max(probs(y[c], c), 1e-300));
  return sum / static_cast<double>(probs.cols());
}

Gradients backprop_from(const MlpModel& m, const Activations& act, const std::vector<int>& y) {
  const std::size_t layers = m.weights.size();
  const double inv = 1.0 / static_cast<double>(act.a[0].cols());
  Gradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);
  MatrixXd delta = act.a.back();
  for (Eigen::Index c = 0; c < delta.cols(); ++c) delta(y[c], c) -= 1.0;
  delta *= inv;
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * act.a[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      MatrixXd back = m.weights[l].transpose() * delta;
      delta = back.cwiseProduct((act.z[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

void check_input(const MlpModel& m, Eigen::Index rows) {
  if (m.layer_sizes.empty() || rows != m.input_size()) {
    throw InvalidArgument("input has " + std::to_string(rows) + " features, model expects " +
                          std::to_string(m.layer_sizes.empty() ? 0 : m.input_size()));
  }
}

MatrixXd standardize(const MlpModel& m, const MatrixXd& raw) {
  MatrixXd x = raw.colwise() - m.feature_mean;
  return m.feature_std.cwiseInverse().asDiagonal() * x;
}

// Lexicographic comparison of columns, used to make training independent of input order.
std::vector<std::size_t> canonical_order(const MatrixXd& x, const std::vector<int>& y) {
  std::vector<std::size_t> idx(x.cols());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (y[a] != y[b]) return y[a] < y[b];
    const double* pa = x.col(a).data();
    const double* pb = x.col(b).data();
    return std::lexicographical_compare(pa, pa + x.rows(), pb, pb + x.rows());
  });
  return idx;
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

MlpModel init_model(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw InvalidArgument("a model needs at least input and output sizes");
  for (int s : layer_sizes)
    if (s < 1) throw InvalidArgument("layer sizes must be positive");
  MlpModel m;
  m.layer_sizes = layer_sizes;
  m.feature_mean = VectorXd::Zero(layer_sizes.front());
  m.feature_std = VectorXd::Ones(layer_sizes.front());
  Rng rng = stream_rng(seed, 0x6d6c70ULL);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    MatrixXd w(fan_out, fan_in);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = u(rng);
    m.weights.push_back(std::move(w));
    m.biases.push_back(VectorXd::Zero(fan_out));
  }
  for (int k = 0; k < layer_sizes.back(); ++k) m.class_names.push_back(std::to_string(k));
  return m;
}

std::vector<int> default_hidden(int) { return {256, 128}; }

Eigen::VectorXd features(const MlpModel& model, const DensityMatrix& rho) {
  if (model.qubit_count != 0 && rho.qubit_count() != model.qubit_count) {
    throw InvalidArgument("model is for " + std::to_string(model.qubit_count) + " qubits, state has " +
                          std::to_string(rho.qubit_count()));
  }
  const auto flat = dataset::flatten(rho.matrix());
  const VectorXd raw = Eigen::Map<const VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  check_input(model, raw.size());
  return standardize(model, raw);
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x) {
  check_input(model, x.size());
  return run(model, x).a.back().col(0);
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x) {
  check_input(model, x.rows());
  return run(model, x).a.back();
}

int argmax(const Eigen::VectorXd& p) {
  int best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (p(i) > p(best)) best = static_cast<int>(i);
  return best;
}

Prediction predict(const MlpModel& model, const DensityMatrix& rho) {
  const VectorXd p = forward(model, features(model, rho));
  const int k = argmax(p);
  return {ClassLabel::from_index(k, rho.qubit_count()), p(k), p};
}

double mean_loss(const MlpModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  check_input(model, x.rows());
  return cross_entropy(run(model, x).a.back(), y);
}

Gradients backprop(const MlpModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  check_input(model, x.rows());
  return backprop_from(model, run(model, x), y);
}

Eigen::MatrixXd feature_matrix(const dataset::Dataset& data) {
  const int n = static_cast<int>(data.header.qubit_count);
  const Eigen::Index dim = 2 * (Eigen::Index{1} << (2 * n));
  MatrixXd x(dim, static_cast<Eigen::Index>(data.records.size()));
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    const auto flat = dataset::flatten(data.records[r].state.matrix());
    x.col(static_cast<Eigen::Index>(r)) = Eigen::Map<const VectorXd>(flat.data(), dim);
  }
  return x;
}

TrainResult train(const Eigen::MatrixXd& raw, const std::vector<int>& y, int class_count, const TrainConfig& cfg) {
  if (raw.cols() == 0) throw InvalidArgument("training set is empty");
  if (static_cast<std::size_t>(raw.cols()) != y.size()) throw InvalidArgument("feature and label counts differ");
  if (cfg.epochs < 0 || cfg.batch < 1 || !(cfg.lr > 0.0)) {
    throw InvalidArgument("epochs must be >= 0, batch >= 1 and lr > 0");
  }
  for (int label : y)
    if (label < 0 || label >= class_count) throw InvalidArgument("label outside [0, class_count)");

  std::vector<int> sizes{static_cast<int>(raw.rows())};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(class_count);
  TrainResult result;
  MlpModel& m = result.model;
  m = init_model(sizes, cfg.seed);
  m.train_meta = {cfg.seed, cfg.epochs, cfg.lr, cfg.batch, ""};

  const auto order = canonical_order(raw, y);
  MatrixXd ordered(raw.rows(), raw.cols());
  std::vector<int> labels(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    ordered.col(static_cast<Eigen::Index>(i)) = raw.col(static_cast<Eigen::Index>(order[i]));
    labels[i] = y[order[i]];
  }

  m.feature_mean = ordered.rowwise().mean();
  const MatrixXd centered = ordered.colwise() - m.feature_mean;
  m.feature_std = (centered.array().square().rowwise().sum() / static_cast<double>(ordered.cols())).sqrt();
  for (Eigen::Index i = 0; i < m.feature_std.size(); ++i)
    if (m.feature_std(i) < 1e-12) m.feature_std(i) = 1.0;
  const MatrixXd x = standardize(m, ordered);

  const std::size_t layers = m.weights.size();
  Gradients mom{}, vel{};
  for (std::size_t l = 0; l < layers; ++l) {
    mom.weights.push_back(MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
    vel.weights.push_back(MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
    mom.biases.push_back(VectorXd::Zero(m.biases[l].size()));
    vel.biases.push_back(VectorXd::Zero(m.biases[l].size()));
  }

  result.loss_history.push_back(mean_loss(m, x, labels));
  if (!std::isfinite(result.loss_history.back())) throw DivergenceError(0, cfg.lr);

  Rng rng = stream_rng(cfg.seed, 0x73687566ULL);
  std::vector<std::size_t> perm(x.cols());
  std::iota(perm.begin(), perm.end(), 0);
  long step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t start = 0; start < perm.size(); start += cfg.batch) {
      const std::size_t count = std::min<std::size_t>(cfg.batch, perm.size() - start);
      MatrixXd xb(x.rows(), static_cast<Eigen::Index>(count));
      std::vector<int> yb(count);
      for (std::size_t i = 0; i < count; ++i) {
        xb.col(static_cast<Eigen::Index>(i)) = x.col(static_cast<Eigen::Index>(perm[start + i]));
        yb[i] = labels[perm[start + i]];
      }
      const Gradients g = backprop(m, xb, yb);
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      auto update = [&](auto& param, auto& mo, auto& ve, const auto& grad) {
        mo = cfg.beta1 * mo + (1.0 - cfg.beta1) * grad;
        ve = cfg.beta2 * ve + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
        param.array() -= cfg.lr * (mo.array() / c1) / ((ve.array() / c2).sqrt() + cfg.adam_eps);
      };
      for (std::size_t l = 0; l < layers; ++l) {
        update(m.weights[l], mom.weights[l], vel.weights[l], g.weights[l]);
        update(m.biases[l], mom.biases[l], vel.biases[l], g.biases[l]);
      }
    }
    const double loss = mean_loss(m, x, labels);
    if (!std::isfinite(loss)) throw DivergenceError(epoch, cfg.lr);
    result.loss_history.push_back(loss);
  }
  return result;
}

TrainResult train(const dataset::Dataset& data, const TrainConfig& config) {
  const int n = static_cast<int>(data.header.qubit_count);
  std::vector<int> y;
  y.reserve(data.records.size());
  bool any_mixed = false;
  for (const auto& r : data.records) {
    y.push_back(r.label.index());
    any_mixed = any_mixed || r.purity == PurityKind::Mixed;
  }
  TrainConfig cfg = config;
  if (cfg.hidden.empty()) cfg.hidden = default_hidden(n);
  auto result = train(feature_matrix(data), y, class_count(n), cfg);
  result.model.qubit_count = n;
  result.model.class_names = class_names(n);
  result.model.train_meta.purity = any_mixed ? "mixed" : "pure";
  return result;
}

GradientCheck gradient_check(const MlpModel& model, const Eigen::VectorXd& x, int y, std::uint64_t seed,
                             int samples, double h) {
  check_input(model, x.size());
  const std::vector<int> label{y};
  const MatrixXd xm = x;
  const Gradients g = backprop(model, xm, label);

  // Flat addressing: (layer, is_bias, flat index).
  struct Param {
    std::size_t layer;
    bool bias;
    Eigen::Index index;
  };
  std::vector<Param> weights_all, biases_all;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < model.weights[l].size(); ++i) weights_all.push_back({l, false, i});
    for (Eigen::Index i = 0; i < model.biases[l].size(); ++i) biases_all.push_back({l, true, i});
  }
  Rng rng = stream_rng(seed, 0x67636bULL);
  std::shuffle(weights_all.begin(), weights_all.end(), rng);
  std::shuffle(biases_all.begin(), biases_all.end(), rng);
  const std::size_t n_bias = std::min<std::size_t>(biases_all.size(), std::max(1, samples / 4));
  const std::size_t n_weight = std::min<std::size_t>(weights_all.size(), samples - n_bias);
  std::vector<Param> chosen(biases_all.begin(), biases_all.begin() + n_bias);
  chosen.insert(chosen.end(), weights_all.begin(), weights_all.begin() + n_weight);

  GradientCheck out;
  MlpModel probe = model;
  for (const auto& p : chosen) {
    double& slot = p.bias ? probe.biases[p.layer](p.index) : probe.weights[p.layer].data()[p.index];
    const double saved = slot;
    slot = saved + h;
    const double up = mean_loss(probe, xm, label);
    slot = saved - h;
    const double down = mean_loss(probe, xm, label);
    slot = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = p.bias ? g.biases[p.layer](p.index) : g.weights[p.layer].data()[p.index];
    if (std::abs(numeric) < 1e-8 && std::abs(analytic) < 1e-8) {
      ++out.skipped;
      continue;
    }
    const double rel = std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric));
    out.max_relative_error = std::max(out.max_relative_error, rel);
    ++out.checked;
  }
  return out;
}

std::string to_json(const MlpModel& m) {
  nlohmann::json j;
  j["version"] = m.version;
  j["n_qubits"] = m.qubit_count;
  j["layer_sizes"] = m.layer_sizes;
  j["activation"] = m.activation;
  j["class_names"] = m.class_names;
  j["feature_mean"] = std::vector<double>(m.feature_mean.data(), m.feature_mean.data() + m.feature_mean.size());
  j["feature_std"] = std::vector<double>(m.feature_std.data(), m.feature_std.data() + m.feature_std.size());
  nlohmann::json ws = nlohmann::json::array();
  nlohmann::json bs = nlohmann::json::array();
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.weights[l].rows(); ++i) {
      std::vector<double> row(m.weights[l].cols());
      for (Eigen::Index k = 0; k < m.weights[l].cols(); ++k) row[k] = m.weights[l](i, k);
      rows.push_back(row);
    }
    ws.push_back(rows);
    bs.push_back(std::vector<double>(m.biases[l].data(), m.biases[l].data() + m.biases[l].size()));
  }
  j["weights"] = ws;
  j["biases"] = bs;
  j["train_meta"] = {{"seed", m.train_meta.seed},
                     {"epochs", m.train_meta.epochs},
                     {"lr", m.train_meta.lr},
                     {"batch", m.train_meta.batch},
                     {"purity", m.train_meta.purity}};
  return j.dump();
}

MlpModel from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatError::Kind::Corrupt, e.byte, std::string("model JSON does not parse: ") + e.what());
  }
  auto schema = [](const std::string& what) {
    return FormatError(FormatError::Kind::Schema, 0, "model JSON schema mismatch: " + what);
  };
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer()) throw schema("missing version");
  MlpModel m;
  m.version = j["version"].get<int>();
  if (m.version != kModelVersion) {
    throw FormatError(FormatError::Kind::UnsupportedVersion, 0,
                      "unsupported model version " + std::to_string(m.version) + " (this build reads " +
                          std::to_string(kModelVersion) + ")");
  }
  try {
    m.qubit_count = j.at("n_qubits").get<int>();
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    m.activation = j.at("activation").get<std::string>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    const auto mean = j.at("feature_mean").get<std::vector<double>>();
    const auto sd = j.at("feature_std").get<std::vector<double>>();
    m.feature_mean = Eigen::Map<const VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    m.feature_std = Eigen::Map<const VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    const auto ws = j.at("weights").get<std::vector<std::vector<std::vector<double>>>>();
    const auto bs = j.at("biases").get<std::vector<std::vector<double>>>();
    if (m.layer_sizes.size() < 2 || ws.size() != m.layer_sizes.size() - 1 || bs.size() != ws.size()) {
      throw schema("layer count");
    }
    for (std::size_t l = 0; l < ws.size(); ++l) {
      const int rows = m.layer_sizes[l + 1], cols = m.layer_sizes[l];
      if (static_cast<int>(ws[l].size()) != rows || static_cast<int>(bs[l].size()) != rows) {
        throw schema("layer " + std::to_string(l) + " shape");
      }
      MatrixXd w(rows, cols);
      for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(ws[l][i].size()) != cols) throw schema("layer " + std::to_string(l) + " shape");
        for (int k = 0; k < cols; ++k) w(i, k) = ws[l][i][k];
      }
      m.weights.push_back(std::move(w));
      m.biases.push_back(Eigen::Map<const VectorXd>(bs[l].data(), rows));
    }
    if (m.feature_mean.size() != m.layer_sizes.front() || m.feature_std.size() != m.layer_sizes.front()) {
      throw schema("standardization size");
    }
    if (static_cast<int>(m.class_names.size()) != m.layer_sizes.back()) throw schema("class name count");
    if (m.activation != "relu") throw schema("activation '" + m.activation + "'");
    const auto& meta = j.at("train_meta");
    m.train_meta.seed = meta.at("seed").get<std::uint64_t>();
    m.train_meta.epochs = meta.at("epochs").get<int>();
    m.train_meta.lr = meta.at("lr").get<double>();
    m.train_meta.batch = meta.at("batch").get<int>();
    m.train_meta.purity = meta.value("purity", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw schema(e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const MlpModel& model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open model for writing");
  os << to_json(model) << '\n';
  if (!os) throw IoError(path.string(), "write failed");
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open model");
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

}  // namespace entc::mlp
