// entc: generate, label, train and evaluate entanglement-class datasets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "entc/coherent.hpp"
#include "entc/dataset.hpp"
#include "entc/errors.hpp"
#include "entc/eval.hpp"
#include "entc/mlp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace entc;

namespace {

enum Exit { kOk = 0, kUsage = 2, kGeneration = 3, kInvalidState = 4, kIo = 5, kDivergence = 6 };

struct Globals {
  std::uint64_t seed = 0;
  double epsilon = measures::kDefaultEpsilon;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void echo_config(const json& config) { std::cerr << "config " << config.dump() << '\n'; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  os << text;
  if (!os) throw IoError(path.string(), "write failed");
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path sidecar(const fs::path& out) { return fs::path(out.string() + ".config.json"); }

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("hidden sizes must be positive integers separated by commas, got '" + text + "'");
    }
  }
  return sizes;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

json tangles_json(const TangleVector& tv) {
  json t{{"tau1", tv.tau1}, {"tau2", tv.tau2}};
  t["tau3"] = tv.tau3 ? json(*tv.tau3) : json(nullptr);
  t["tau4"] = tv.tau4 ? json(*tv.tau4) : json(nullptr);
  return t;
}

// {"n_qubits": k, "matrix": [[{"re": .., "im": ..}, ..], ..]}
DensityMatrix parse_state_json(const std::string& text) {
  auto bad = [](const std::string& what) {
    return StateError(StateError::Kind::BadDimension, 0.0, "state JSON: " + what);
  };
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw bad(std::string("does not parse: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n_qubits") || !j.contains("matrix")) throw bad("needs n_qubits and matrix");
  if (!j["n_qubits"].is_number_integer()) throw bad("n_qubits must be an integer");
  const int n = j["n_qubits"].get<int>();
  if (n < 2 || n > 4) throw bad("n_qubits must be 2, 3 or 4");
  const auto& rows = j["matrix"];
  const std::size_t dim = std::size_t{1} << n;
  if (!rows.is_array() || rows.size() != dim) throw bad("matrix must have " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || rows[i].size() != dim) {
      throw bad("row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& e = rows[i][k];
      if (!e.is_object() || !e.contains("re") || !e["re"].is_number() || (e.contains("im") && !e["im"].is_number())) {
        throw bad("entry (" + std::to_string(i) + "," + std::to_string(k) + ") must be {\"re\": x, \"im\": y}");
      }
      m(i, k) = Complex(e["re"].get<double>(), e.value("im", 0.0));
    }
  }
  return DensityMatrix::validate(m, n);
}

const char* invariant_name(StateError::Kind k) {
  switch (k) {
    case StateError::Kind::NotHermitian:
      return "hermiticity";
    case StateError::Kind::BadTrace:
      return "unit trace";
    case StateError::Kind::NotPsd:
      return "positive semidefiniteness";
    case StateError::Kind::BadDimension:
      return "shape";
  }
  return "unknown";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-class datasets, tangle labeler and MLP classifiers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--epsilon", g.epsilon, "Tangle threshold")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a class-balanced labeled dataset");
  int gen_qubits = 2, gen_per_class = 1000;
  std::string gen_purity = "pure", gen_out;
  std::uint64_t gen_pilot = 10'000, gen_rejection = 40'000;
  gen->add_option("--qubits", gen_qubits)->required()->check(CLI::IsMember({2, 3, 4}));
  gen->add_option("--per-class", gen_per_class)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--purity", gen_purity)->capture_default_str()->check(CLI::IsMember({"pure", "mixed"}));
  gen->add_option("--pilot-draws", gen_pilot)->capture_default_str();
  gen->add_option("--max-rejection-draws", gen_rejection)->capture_default_str();
  gen->add_option("--out", gen_out)->required();

  // split
  auto* spl = app.add_subcommand("split", "Stratified train/test split");
  std::string split_in, split_train, split_test;
  double split_fraction = 0.8;
  spl->add_option("--in", split_in)->required();
  spl->add_option("--train-fraction", split_fraction)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  spl->add_option("--train-out", split_train)->required();
  spl->add_option("--test-out", split_test)->required();

  // label
  auto* lab = app.add_subcommand("label", "Tangles and class of one density matrix");
  std::string label_in;
  bool label_strict = false;
  lab->add_option("--in", label_in)->required();
  lab->add_flag("--strict", label_strict, "Three qubits: report separable when tau3 <= epsilon");

  // train
  auto* trn = app.add_subcommand("train", "Train an MLP classifier");
  std::string train_data, train_out, train_hidden;
  int train_epochs = 50, train_batch = 64;
  double train_lr = 1e-3;
  trn->add_option("--data", train_data)->required();
  trn->add_option("--hidden", train_hidden, "Comma-separated hidden sizes (default 256,128)");
  trn->add_option("--epochs", train_epochs)->capture_default_str()->check(CLI::NonNegativeNumber);
  trn->add_option("--lr", train_lr)->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--batch", train_batch)->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--out", train_out)->required();

  // eval
  auto* evl = app.add_subcommand("eval", "Confusion matrix, accuracy and precision on a test set");
  std::string eval_data, eval_model, eval_report;
  evl->add_option("--data", eval_data)->required();
  evl->add_option("--model", eval_model)->required();
  evl->add_option("--report", eval_report);

  // curves
  auto* crv = app.add_subcommand("curves", "Tangles and labels of representative families along a grid");
  std::string curve_families = "ghz3,w3,ghz4,w4,x4", curve_alpha = "0.1:3.0:60", curve_b = "0:1:101", curve_out;
  double curve_mix_alpha = 3.0;
  crv->add_option("--family", curve_families, "ghz3,w3,ghz4,w4,x4,mix3,mix3:B,mix4:A/B/C")->capture_default_str();
  crv->add_option("--alpha", curve_alpha, "start:stop:count")->capture_default_str();
  crv->add_option("--b", curve_b, "Grid of b for the mix3 token")->capture_default_str();
  crv->add_option("--mix-alpha", curve_mix_alpha, "alpha used by the mix3 token")->capture_default_str();
  crv->add_option("--out", curve_out)->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Known states: labeler truth against the models");
  std::string verify_dir, verify_report;
  ver->add_option("--models", verify_dir, "Directory holding model JSON files")->required();
  ver->add_option("--report", verify_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  json config{{"seed", g.seed}, {"epsilon", g.epsilon}, {"threads", g.threads}};
  try {
    if (*gen) {
      dataset::GenerateConfig cfg;
      cfg.qubit_count = gen_qubits;
      cfg.per_class = gen_per_class;
      cfg.purity = gen_purity == "pure" ? PurityKind::Pure : PurityKind::Mixed;
      cfg.epsilon = g.epsilon;
      cfg.seed = g.seed;
      cfg.threads = g.threads;
      cfg.pilot_draws = gen_pilot;
      cfg.max_rejection_draws = gen_rejection;
      config.update({{"command", "gen"},
                     {"qubits", gen_qubits},
                     {"per_class", gen_per_class},
                     {"purity", gen_purity},
                     {"pilot_draws", gen_pilot},
                     {"max_rejection_draws", gen_rejection},
                     {"max_attempts", cfg.max_attempts},
                     {"out", gen_out}});
      echo_config(config);
      dataset::GenerateSummary summary;
      const auto data = dataset::generate(cfg, &summary);
      dataset::write_dataset(gen_out, data);
      write_text(gen_out + ".json", dataset::summary_json(summary, cfg) + "\n");
      for (const auto& c : summary.classes) {
        std::cerr << c.name << ": " << c.count << " (" << c.from_rejection << " by rejection, " << c.from_construction
                  << " constructed)\n";
      }
      std::cout << data.records.size() << " records written to " << gen_out << '\n';
    } else if (*spl) {
      config.update({{"command", "split"},
                     {"in", split_in},
                     {"train_fraction", split_fraction},
                     {"train_out", split_train},
                     {"test_out", split_test}});
      echo_config(config);
      const auto data = dataset::read_dataset(split_in);
      const auto parts = dataset::split(data, split_fraction, g.seed);
      dataset::write_dataset(split_train, parts.train);
      dataset::write_dataset(split_test, parts.test);
      write_text(sidecar(split_train), config.dump(2) + "\n");
      std::cout << parts.train.records.size() << " train / " << parts.test.records.size() << " test\n";
    } else if (*lab) {
      config.update({{"command", "label"}, {"in", label_in}, {"strict", label_strict}});
      echo_config(config);
      const auto rho = parse_state_json(read_text(label_in));
      const auto tv = measures::tangle_vector(rho, g.epsilon);
      const json out{{"n_qubits", rho.qubit_count()},
                     {"tangles", tangles_json(tv)},
                     {"epsilon", g.epsilon},
                     {"label", classify::label(tv, label_strict).name()}};
      std::cout << out.dump(2) << '\n';
    } else if (*trn) {
      const auto data = dataset::read_dataset(train_data);
      mlp::TrainConfig cfg;
      const int n = static_cast<int>(data.header.qubit_count);
      cfg.hidden = train_hidden.empty() ? mlp::default_hidden(n) : parse_sizes(train_hidden);
      cfg.epochs = train_epochs;
      cfg.lr = train_lr;
      cfg.batch = train_batch;
      cfg.seed = g.seed;
      config.update({{"command", "train"},
                     {"data", train_data},
                     {"hidden", cfg.hidden},
                     {"epochs", cfg.epochs},
                     {"lr", cfg.lr},
                     {"batch", cfg.batch},
                     {"beta1", cfg.beta1},
                     {"beta2", cfg.beta2},
                     {"out", train_out}});
      echo_config(config);
      const auto result = mlp::train(data, cfg);
      mlp::save_model(train_out, result.model);
      json side = config;
      side["loss_history"] = result.loss_history;
      write_text(sidecar(train_out), side.dump(2) + "\n");
      std::cout << "loss " << result.loss_history.front() << " -> " << result.loss_history.back() << " after "
                << cfg.epochs << " epochs; model written to " << train_out << '\n';
    } else if (*evl) {
      config.update({{"command", "eval"}, {"data", eval_data}, {"model", eval_model}, {"report", eval_report}});
      echo_config(config);
      const auto data = dataset::read_dataset(eval_data);
      const auto model = mlp::load_model(eval_model);
      const auto cm = eval::confusion(model, data, g.threads);
      std::cout << eval::pretty_table(cm);
      if (!eval_report.empty()) {
        write_text(eval_report, eval::report_json(cm) + "\n");
        write_text(sidecar(eval_report), config.dump(2) + "\n");
      }
    } else if (*crv) {
      config.update({{"command", "curves"},
                     {"family", curve_families},
                     {"alpha", curve_alpha},
                     {"b", curve_b},
                     {"mix_alpha", curve_mix_alpha},
                     {"out", curve_out}});
      echo_config(config);
      const auto alpha_grid = coherent::parse_grid(curve_alpha);
      std::vector<coherent::CurveRow> rows;
      for (const auto& token : split_list(curve_families)) {
        const auto grid = token == "mix3" ? coherent::parse_grid(curve_b) : alpha_grid;
        auto part = coherent::curve(token, grid, g.epsilon, curve_mix_alpha);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      coherent::write_curves(curve_out, rows);
      write_text(sidecar(curve_out), config.dump(2) + "\n");
      std::cout << rows.size() << " rows written to " << curve_out << '\n';
    } else if (*ver) {
      config.update({{"command", "verify"}, {"models", verify_dir}, {"report", verify_report}});
      echo_config(config);
      if (!fs::is_directory(verify_dir)) throw IoError(verify_dir, "model directory not found");
      eval::ModelSet models;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(verify_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        mlp::MlpModel m;
        try {
          m = mlp::load_model(f);
        } catch (const FormatError&) {
          continue;  // sidecars and reports share the extension
        }
        auto& slot = m.train_meta.purity == "mixed" ? models.mixed : models.pure;
        if (!slot.count(m.qubit_count)) {
          std::cerr << "using " << f.string() << " for " << m.qubit_count << " qubits (" << m.train_meta.purity
                    << ")\n";
          slot.emplace(m.qubit_count, std::move(m));
        }
      }
      for (int n = 2; n <= 4; ++n)
        if (!models.pure.count(n) && !models.mixed.count(n))
          std::cerr << "no " << n << "-qubit model in " << verify_dir << "; those rows are skipped\n";
      const auto rows = eval::verify_known_states(models, g.epsilon);
      std::cout << eval::verify_table(rows);
      if (!verify_report.empty()) write_text(verify_report, eval::verify_json(rows) + "\n");
    }
  } catch (const GenerationExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGeneration;
  } catch (const StateError& e) {
    std::cerr << "error: invalid density matrix (" << invariant_name(e.kind()) << "): " << e.what() << '\n';
    return kInvalidState;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << " (byte offset " << e.offset() << ")\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
