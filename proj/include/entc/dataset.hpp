#pragma once

// Labeled density-matrix datasets and the .entc binary format.
//
// Layout (little-endian):
//   header  "ENTC" | version u32 | n_qubits u32 | n_records u64 | epsilon f64 | seed u64   (36 bytes)
//   record  label u8 | purity u8 | 2 * 4^n f64 (row-major, re/im interleaved)
// Records are fixed-size, so record i starts at 36 + i * record_bytes(n).

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "entc/classify.hpp"

namespace entc::dataset {

inline constexpr std::array<char, 4> kMagic{'E', 'N', 'T', 'C'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 36;

std::size_t record_bytes(int qubit_count);

struct DatasetHeader {
  std::uint32_t version = kVersion;
  std::uint32_t qubit_count = 2;
  std::uint64_t record_count = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

struct LabeledRecord {
  ClassLabel label;
  PurityKind purity = PurityKind::Pure;
  DensityMatrix state;
};

struct Dataset {
  DatasetHeader header;
  std::vector<LabeledRecord> records;
};

// Header record_count is taken from records.size().
void write_dataset(const std::filesystem::path& path, const Dataset& data);

/// Reads and validates a dataset. Throws FormatError (BadMagic, BadVersion,
/// Truncated, Corrupt) with the byte offset of the problem, or IoError.
Dataset read_dataset(const std::filesystem::path& path);

// Raw feature layout shared with the file: re/im interleaved, row-major.
std::vector<double> flatten(const ComplexMatrix& m);

struct GenerateConfig {
  int qubit_count = 2;
  int per_class = 100;
  PurityKind purity = PurityKind::Pure;
  double epsilon = measures::kDefaultEpsilon;
  std::uint64_t seed = 0;
  int threads = 1;
  // Shared random draws examined for rejection sampling before the
  // constructive samplers take over.
  std::uint64_t pilot_draws = 10'000;
  std::uint64_t max_rejection_draws = 40'000;
  // Per-class cap on constructive proposals.
  std::uint64_t max_attempts = 10'000'000;
};

struct ClassSummary {
  std::string name;
  std::uint64_t count = 0;
  std::uint64_t from_rejection = 0;
  std::uint64_t from_construction = 0;
  std::uint64_t attempts = 0;
  double pilot_yield = 0.0;
};

struct GenerateSummary {
  std::vector<ClassSummary> classes;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::uint64_t rejection_draws = 0;
  std::uint64_t duplicates_dropped = 0;
  double wall_seconds = 0.0;
};

/// Class-balanced dataset with exactly per_class records per class. The
/// separable class comes from separable_sample over random partitions.
/// Entangled classes are filled first by rejection from random pure/mixed
/// states; classes whose pilot yield is below 1e-4, or that are still short
/// after max_rejection_draws, are completed from local-unitary orbits of the
/// representative states and their noisy mixtures. Every record's label is
/// recomputed before it is kept and rounded-hash duplicates are dropped.
/// Output is a function of the config alone, independent of `threads`.
Dataset generate(const GenerateConfig& config, GenerateSummary* summary = nullptr);

// JSON sidecar with per-class counts, seed, epsilon and wall time.
std::string summary_json(const GenerateSummary& summary, const GenerateConfig& config);

struct SplitResult {
  Dataset train;
  Dataset test;
};

/// Stratified shuffle split. Each class contributes round(fraction * count)
/// records to train; test records whose dedup key also occurs in train are
/// dropped so the halves share no state.
SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace entc::dataset
