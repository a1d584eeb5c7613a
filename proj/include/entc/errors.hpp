#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entc {

// Bad shapes, out-of-range parameters, inconsistent inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPsdError : public std::runtime_error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// A matrix that fails one of the density-matrix invariants.
class StateError : public std::runtime_error {
 public:
  enum class Kind { NotHermitian, BadTrace, NotPsd, BadDimension };

  StateError(Kind kind, double magnitude, const std::string& what)
      : std::runtime_error(what), kind_(kind), magnitude_(magnitude) {}

  Kind kind() const noexcept { return kind_; }
  // Size of the violation: max |m - m^H|, |Tr m - 1|, or the offending eigenvalue.
  double magnitude() const noexcept { return magnitude_; }

 private:
  Kind kind_;
  double magnitude_;
};

class FormatError : public std::runtime_error {
 public:
  enum class Kind { Truncated, BadMagic, BadVersion, Corrupt, Schema, UnsupportedVersion };

  FormatError(Kind kind, std::uint64_t offset, const std::string& what)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::uint64_t offset_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class GenerationExhausted : public std::runtime_error {
 public:
  GenerationExhausted(const std::string& class_name, std::uint64_t attempts)
      : std::runtime_error("generation exhausted for class " + class_name + " after " +
                           std::to_string(attempts) + " attempts"),
        class_name_(class_name) {}
  const std::string& class_name() const noexcept { return class_name_; }

 private:
  std::string class_name_;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, double lr)
      : std::runtime_error("training diverged (non-finite loss) at epoch " + std::to_string(epoch) +
                           " with lr " + std::to_string(lr)),
        epoch_(epoch),
        lr_(lr) {}
  int epoch() const noexcept { return epoch_; }
  double lr() const noexcept { return lr_; }

 private:
  int epoch_;
  double lr_;
};

}  // namespace entc
