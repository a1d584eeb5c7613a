#pragma once

// Fully connected classifier: ReLU hidden layers, softmax output, trained with
// Adam on mean cross-entropy. Inputs are the flattened density-matrix entries
// (re/im interleaved, row-major), z-scored with statistics from the training set.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entc/dataset.hpp"

namespace entc::mlp {

inline constexpr int kModelVersion = 1;

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  double lr = 0.0;
  int batch = 0;
  std::string purity;
};

struct MlpModel {
  int version = kModelVersion;
  int qubit_count = 0;                // 0 for models not tied to density matrices
  std::vector<int> layer_sizes;       // input, hidden..., output
  std::string activation = "relu";
  std::vector<std::string> class_names;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_std;
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is layer_sizes[l+1] x layer_sizes[l]
  std::vector<Eigen::VectorXd> biases;
  TrainMeta train_meta;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;
};

// Glorot-uniform weights, zero biases, identity standardization.
MlpModel init_model(const std::vector<int>& layer_sizes, std::uint64_t seed);

// Default hidden layers, [256, 128] at every qubit count.
std::vector<int> default_hidden(int qubit_count);

// Standardized feature vector of a state under the model's statistics.
Eigen::VectorXd features(const MlpModel& model, const DensityMatrix& rho);

/// Class probabilities for an already standardized input. Throws
/// InvalidArgument on a dimension mismatch.
Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x);

// Column-wise forward pass over a batch (one sample per column).
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x);

struct Prediction {
  ClassLabel label;
  double probability = 0.0;
  Eigen::VectorXd probabilities;
};

/// Argmax class of the model for a state; ties go to the lowest index.
Prediction predict(const MlpModel& model, const DensityMatrix& rho);

// Index of the largest entry, lowest index on ties.
int argmax(const Eigen::VectorXd& p);

struct TrainConfig {
  std::vector<int> hidden;
  int epochs = 50;
  double lr = 1e-3;
  int batch = 64;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct TrainResult {
  MlpModel model;
  // Mean cross-entropy over the training set: entry 0 at initialization,
  // entry e after epoch e.
  std::vector<double> loss_history;
};

/// Trains on a matrix of raw features (one sample per column) with integer
/// labels. Standardization statistics come from `x`. The sample order is
/// canonicalized before the seeded shuffle, so the input order does not
/// affect the result. Throws DivergenceError on a non-finite loss.
TrainResult train(const Eigen::MatrixXd& x, const std::vector<int>& y, int class_count, const TrainConfig& config);

// Convenience overload over a dataset; fills qubit_count, class names and purity.
TrainResult train(const dataset::Dataset& data, const TrainConfig& config);

// Raw (unstandardized) features of every record, one per column.
Eigen::MatrixXd feature_matrix(const dataset::Dataset& data);

// Mean cross-entropy of standardized inputs.
double mean_loss(const MlpModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Gradient of the mean cross-entropy over the columns of x (standardized).
Gradients backprop(const MlpModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y);

struct GradientCheck {
  double max_relative_error = 0.0;
  int checked = 0;
  int skipped = 0;  // both gradients below 1e-8 in magnitude
};

/// Compares backprop against central differences (step h) on `samples`
/// randomly chosen parameters, always including some biases.
GradientCheck gradient_check(const MlpModel& model, const Eigen::VectorXd& x, int y, std::uint64_t seed,
                             int samples = 64, double h = 1e-5);

std::string to_json(const MlpModel& model);
MlpModel from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const MlpModel& model);
/// Throws IoError, FormatError(Schema/Corrupt) or FormatError(UnsupportedVersion).
MlpModel load_model(const std::filesystem::path& path);

}  // namespace entc::mlp
