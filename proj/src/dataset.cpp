#include "entc/dataset.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "json.hpp"

#include "entc/coherent.hpp"
#include "entc/errors.hpp"
#include "entc/parallel.hpp"

namespace entc::dataset {

namespace {

// ---- byte-level encoding -------------------------------------------------

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

template <typename T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= static_cast<U>(p[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

// ---- generation ------------------------------------------------------------

constexpr std::uint64_t kDrawStream = 0x1000000000000000ULL;
constexpr std::uint64_t kSeparableStream = 0x2000000000000000ULL;
constexpr std::uint64_t kConstructStream = 0x3000000000000000ULL;

std::uint64_t slot_stream(std::uint64_t base, int cls, int slot, int retry) {
  return base + ((static_cast<std::uint64_t>(cls) << 40) | (static_cast<std::uint64_t>(slot) << 8) |
                 static_cast<std::uint64_t>(retry));
}

void collect_partitions(int q, int n, Partition& current, std::vector<Partition>& out) {
  if (q == n) {
    if (current.size() >= 2) out.push_back(current);
    return;
  }
  for (std::size_t b = 0; b < current.size(); ++b) {
    current[b].push_back(q);
    collect_partitions(q + 1, n, current, out);
    current[b].pop_back();
  }
  current.push_back({q});
  collect_partitions(q + 1, n, current, out);
  current.pop_back();
}

// Every set partition of {0..n-1} with at least two blocks.
const std::vector<Partition>& separable_partitions(int n) {
  static const auto table = [] {
    std::array<std::vector<Partition>, 5> t;
    for (int k = 2; k <= 4; ++k) {
      Partition cur;
      collect_partitions(0, k, cur, t[k]);
    }
    return t;
  }();
  return table.at(n);
}

// Random magnitudes and phases on the support of a family's terms.
ComplexVector generalized(const std::vector<std::string>& terms, Rng& rng) {
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const int n = static_cast<int>(terms.front().size());
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << n);
  for (const auto& t : terms) psi(std::stoi(t, nullptr, 2)) += std::polar(mag(rng), phase(rng));
  return psi / psi.norm();
}

// Representative families by class index (index 0, the separable class, has none).
std::vector<std::vector<std::string>> representatives(int n) {
  using coherent::Family;
  using coherent::family_terms;
  switch (n) {
    case 2:
      return {{}, {"00", "11"}};
    case 3:
      return {{}, family_terms(Family::W3), family_terms(Family::GHZ3)};
    default:
      return {{}, family_terms(Family::W4), family_terms(Family::X4), family_terms(Family::GHZ4)};
  }
}

// One constructive proposal aimed at class `cls`: the class representative
// (pure), or a mixture dominated by it with the other representatives and a
// random full-rank state, followed by a random local unitary.
DensityMatrix construct_candidate(int n, int cls, PurityKind purity, Rng& rng) {
  const auto reps = representatives(n);
  if (purity == PurityKind::Pure) {
    auto psi = DensityMatrix::from_pure(generalized(reps[cls], rng));
    return conjugate(psi, random_local_unitary(n, rng));
  }
  std::uniform_real_distribution<double> dominant(0.55, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double w_target = dominant(rng);

  std::vector<DensityMatrix> parts;
  std::vector<double> raw;
  for (int c = 1; c < static_cast<int>(reps.size()); ++c) {
    if (c == cls) continue;
    parts.push_back(DensityMatrix::from_pure(generalized(reps[c], rng)));
    raw.push_back(expo(rng));
  }
  parts.push_back(random_mixed(n, rng));
  raw.push_back(expo(rng));
  const double raw_sum = std::accumulate(raw.begin(), raw.end(), 0.0);

  std::vector<double> w{w_target};
  std::vector<DensityMatrix> states{DensityMatrix::from_pure(generalized(reps[cls], rng))};
  double acc = w_target;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double wi = i + 1 == parts.size() ? std::max(0.0, 1.0 - acc) : (1.0 - w_target) * raw[i] / raw_sum;
    acc += wi;
    w.push_back(wi);
    states.push_back(parts[i]);
  }
  const auto mixed = mixture(w, states);
  return conjugate(mixed, random_local_unitary(n, rng));
}

DensityMatrix separable_candidate(int n, PurityKind purity, Rng& rng, double epsilon) {
  const auto& parts = separable_partitions(n);
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
  return separable_sample(n, parts[pick(rng)], purity, rng, epsilon);
}

struct SlotResult {
  std::optional<DensityMatrix> state;
  std::uint64_t attempts = 0;
};

SlotResult fill_slot(const GenerateConfig& cfg, int cls, int slot, int retry) {
  const int n = cfg.qubit_count;
  const bool separable = cls == 0;
  Rng rng = stream_rng(cfg.seed, slot_stream(separable ? kSeparableStream : kConstructStream, cls, slot, retry));
  SlotResult out;
  while (out.attempts < cfg.max_attempts) {
    ++out.attempts;
    auto rho = separable ? separable_candidate(n, cfg.purity, rng, cfg.epsilon)
                         : construct_candidate(n, cls, cfg.purity, rng);
    if (classify::label(measures::tangle_vector(rho, cfg.epsilon)).index() == cls) {
      out.state = std::move(rho);
      return out;
    }
  }
  return out;
}

}  // namespace

std::size_t record_bytes(int qubit_count) {
  const std::size_t dim = std::size_t{1} << qubit_count;
  return 2 + 2 * dim * dim * sizeof(double);
}

std::vector<double> flatten(const ComplexMatrix& m) {
  std::vector<double> out;
  out.reserve(2 * m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  const int n = static_cast<int>(data.header.qubit_count);
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + data.records.size() * record_bytes(n));
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(buf, data.header.version);
  put_le<std::uint32_t>(buf, data.header.qubit_count);
  put_le<std::uint64_t>(buf, data.records.size());
  put_le<double>(buf, data.header.epsilon);
  put_le<std::uint64_t>(buf, data.header.seed);
  for (const auto& r : data.records) {
    if (r.state.qubit_count() != n) throw InvalidArgument("write_dataset: record qubit count differs from header");
    buf.push_back(static_cast<unsigned char>(r.label.index()));
    buf.push_back(static_cast<unsigned char>(r.purity));
    for (double x : flatten(r.state.matrix())) put_le<double>(buf, x);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open dataset for writing");
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw IoError(path.string(), "write failed");
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open dataset");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  if (buf.size() < kHeaderBytes) {
    throw FormatError(FormatError::Kind::Truncated, buf.size(), "file ends inside the 36-byte header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin())) {
    throw FormatError(FormatError::Kind::BadMagic, 0, "bad magic (expected \"ENTC\")");
  }
  Dataset data;
  data.header.version = get_le<std::uint32_t>(&buf[4]);
  if (data.header.version != kVersion) {
    throw FormatError(FormatError::Kind::BadVersion, 4,
                      "unsupported dataset version " + std::to_string(data.header.version));
  }
  data.header.qubit_count = get_le<std::uint32_t>(&buf[8]);
  data.header.record_count = get_le<std::uint64_t>(&buf[12]);
  data.header.epsilon = get_le<double>(&buf[20]);
  data.header.seed = get_le<std::uint64_t>(&buf[28]);
  const int n = static_cast<int>(data.header.qubit_count);
  if (n < 2 || n > 4) {
    throw FormatError(FormatError::Kind::Corrupt, 8, "qubit count " + std::to_string(n) + " outside [2, 4]");
  }

  const std::size_t rb = record_bytes(n);
  const std::size_t available = (buf.size() - kHeaderBytes) / rb;
  if (available < data.header.record_count) {
    throw FormatError(FormatError::Kind::Truncated, kHeaderBytes + available * rb,
                      "header declares " + std::to_string(data.header.record_count) + " records, file holds " +
                          std::to_string(available));
  }
  const std::size_t expected = kHeaderBytes + data.header.record_count * rb;
  if (buf.size() != expected) {
    throw FormatError(FormatError::Kind::Corrupt, expected, "trailing bytes after the last record");
  }

  const Eigen::Index dim = Eigen::Index{1} << n;
  data.records.reserve(data.header.record_count);
  for (std::size_t r = 0; r < data.header.record_count; ++r) {
    const std::size_t off = kHeaderBytes + r * rb;
    const int label = buf[off];
    const int purity = buf[off + 1];
    if (label >= class_count(n)) {
      throw FormatError(FormatError::Kind::Corrupt, off, "invalid class byte " + std::to_string(label));
    }
    if (purity > 1) {
      throw FormatError(FormatError::Kind::Corrupt, off + 1, "invalid purity byte " + std::to_string(purity));
    }
    ComplexMatrix m(dim, dim);
    const unsigned char* p = &buf[off + 2];
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double re = get_le<double>(p);
        const double im = get_le<double>(p + 8);
        m(i, j) = Complex(re, im);
        p += 16;
      }
    try {
      data.records.push_back({ClassLabel::from_index(label, n), static_cast<PurityKind>(purity),
                              DensityMatrix::validate(m, n, static_cast<PurityKind>(purity))});
    } catch (const StateError& e) {
      throw FormatError(FormatError::Kind::Corrupt, off, std::string("invalid state: ") + e.what());
    }
  }
  return data;
}

Dataset generate(const GenerateConfig& cfg, GenerateSummary* summary) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = cfg.qubit_count;
  if (n < 2 || n > 4) throw InvalidArgument("generate: qubit count must be 2, 3 or 4");
  if (cfg.per_class < 1) throw InvalidArgument("generate: per_class must be at least 1");
  if (cfg.purity == PurityKind::Unknown) throw InvalidArgument("generate: purity must be pure or mixed");

  const int classes = class_count(n);
  const auto per_class = static_cast<std::size_t>(cfg.per_class);
  std::vector<std::vector<DensityMatrix>> slots(classes);
  std::vector<ClassSummary> stats(classes);
  for (int c = 0; c < classes; ++c) stats[c].name = ClassLabel::from_index(c, n).name();
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t duplicates = 0;

  // Rejection phase: shared random draws, labeled and kept when their class
  // still has room. Draws are evaluated in parallel chunks and consumed in
  // draw order.
  std::vector<bool> rejection_ok(classes, true);
  rejection_ok[0] = false;
  std::vector<std::uint64_t> pilot_hits(classes, 0);
  std::uint64_t draws = 0;
  auto rejection_full = [&] {
    for (int c = 1; c < classes; ++c)
      if (rejection_ok[c] && slots[c].size() < per_class) return false;
    return true;
  };
  const std::uint64_t limit = std::max(cfg.pilot_draws, cfg.max_rejection_draws);
  const std::size_t chunk = 128;
  while (draws < limit && !rejection_full()) {
    const std::uint64_t stop = draws < cfg.pilot_draws ? std::min<std::uint64_t>(cfg.pilot_draws, draws + chunk)
                                                       : std::min<std::uint64_t>(limit, draws + chunk);
    const std::size_t count = stop - draws;
    std::vector<std::optional<DensityMatrix>> states(count);
    std::vector<int> labels(count, 0);
    parallel_for(count, cfg.threads, [&](std::size_t i) {
      Rng rng = stream_rng(cfg.seed, kDrawStream + draws + i);
      auto rho = cfg.purity == PurityKind::Pure ? random_pure(n, rng) : random_mixed(n, rng);
      labels[i] = classify::label(measures::tangle_vector(rho, cfg.epsilon)).index();
      states[i] = std::move(rho);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const int c = labels[i];
      if (draws + i < cfg.pilot_draws) ++pilot_hits[c];
      if (!rejection_ok[c] || slots[c].size() >= per_class) continue;
      if (!seen.insert(dedup_key(states[i]->matrix())).second) {
        ++duplicates;
        continue;
      }
      slots[c].push_back(std::move(*states[i]));
    }
    draws = stop;
    if (draws == cfg.pilot_draws) {
      // Below one acceptance per 10^4 draws, rejection is abandoned for the class.
      for (int c = 1; c < classes; ++c) {
        const double yield = static_cast<double>(pilot_hits[c]) / static_cast<double>(cfg.pilot_draws);
        if (yield < 1e-4) {
          rejection_ok[c] = false;
          slots[c].clear();
        }
      }
    }
  }
  const std::uint64_t pilot_total = std::min(draws, cfg.pilot_draws);
  for (int c = 0; c < classes; ++c) {
    stats[c].from_rejection = slots[c].size();
    stats[c].pilot_yield = pilot_total ? static_cast<double>(pilot_hits[c]) / static_cast<double>(pilot_total) : 0.0;
  }
  // Hashes of dropped pilot records must not block later slots.
  seen.clear();
  for (const auto& cls : slots)
    for (const auto& s : cls) seen.insert(dedup_key(s.matrix()));

  // Constructive phase: each remaining slot has its own stream; duplicates
  // are regenerated with the next retry index.
  for (int c = 0; c < classes; ++c) {
    const std::size_t start = slots[c].size();
    const std::size_t missing = per_class - start;
    std::vector<SlotResult> results(missing);
    parallel_for(missing, cfg.threads, [&](std::size_t i) {
      results[i] = fill_slot(cfg, c, static_cast<int>(start + i), 0);
    });
    for (std::size_t i = 0; i < missing; ++i) {
      SlotResult res = std::move(results[i]);
      stats[c].attempts += res.attempts;
      int retry = 0;
      while (res.state && !seen.insert(dedup_key(res.state->matrix())).second) {
        ++duplicates;
        if (++retry >= 256) throw GenerationExhausted(stats[c].name, stats[c].attempts);
        res = fill_slot(cfg, c, static_cast<int>(start + i), retry);
        stats[c].attempts += res.attempts;
      }
      if (!res.state || stats[c].attempts > cfg.max_attempts) {
        throw GenerationExhausted(stats[c].name, stats[c].attempts);
      }
      slots[c].push_back(std::move(*res.state));
      ++stats[c].from_construction;
    }
    stats[c].count = slots[c].size();
  }

  Dataset data;
  data.header.qubit_count = static_cast<std::uint32_t>(n);
  data.header.epsilon = cfg.epsilon;
  data.header.seed = cfg.seed;
  for (int c = 0; c < classes; ++c) {
    for (auto& s : slots[c]) {
      // Purity byte records how the state was built; a mixed draw is never exactly pure.
      data.records.push_back({ClassLabel::from_index(c, n), cfg.purity, std::move(s)});
    }
  }
  data.header.record_count = data.records.size();

  if (summary) {
    summary->classes = stats;
    summary->seed = cfg.seed;
    summary->epsilon = cfg.epsilon;
    summary->rejection_draws = draws;
    summary->duplicates_dropped = duplicates;
    summary->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return data;
}

std::string summary_json(const GenerateSummary& summary, const GenerateConfig& cfg) {
  nlohmann::json j;
  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json detail = nlohmann::json::array();
  for (const auto& c : summary.classes) {
    counts[c.name] = c.count;
    detail.push_back({{"class", c.name},
                      {"count", c.count},
                      {"from_rejection", c.from_rejection},
                      {"from_construction", c.from_construction},
                      {"construction_attempts", c.attempts},
                      {"pilot_yield", c.pilot_yield}});
  }
  j["counts"] = counts;
  j["classes"] = detail;
  j["seed"] = summary.seed;
  j["epsilon"] = summary.epsilon;
  j["wall_time_s"] = summary.wall_seconds;
  j["rejection_draws"] = summary.rejection_draws;
  j["duplicates_dropped"] = summary.duplicates_dropped;
  j["config"] = {{"qubits", cfg.qubit_count},
                 {"per_class", cfg.per_class},
                 {"purity", cfg.purity == PurityKind::Pure ? "pure" : "mixed"},
                 {"pilot_draws", cfg.pilot_draws},
                 {"max_rejection_draws", cfg.max_rejection_draws},
                 {"max_attempts", cfg.max_attempts},
                 {"threads", cfg.threads}};
  return j.dump(2);
}

SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw InvalidArgument("split: train fraction must lie in [0, 1]");
  }
  const int n = static_cast<int>(data.header.qubit_count);
  const int classes = class_count(n);
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < data.records.size(); ++i) by_class[data.records[i].label.index()].push_back(i);

  std::vector<std::size_t> train_idx, test_idx;
  for (int c = 0; c < classes; ++c) {
    auto& idx = by_class[c];
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(c));
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + cut);
    test_idx.insert(test_idx.end(), idx.begin() + cut, idx.end());
  }

  SplitResult out;
  out.train.header = data.header;
  out.test.header = data.header;
  std::unordered_set<std::uint64_t> train_keys;
  for (std::size_t i : train_idx) {
    train_keys.insert(dedup_key(data.records[i].state.matrix()));
    out.train.records.push_back(data.records[i]);
  }
  for (std::size_t i : test_idx) {
    if (train_keys.count(dedup_key(data.records[i].state.matrix()))) continue;
    out.test.records.push_back(data.records[i]);
  }
  out.train.header.record_count = out.train.records.size();
  out.test.header.record_count = out.test.records.size();
  return out;
}

}  // namespace entc::dataset
