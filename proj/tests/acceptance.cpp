// Acceptance suite. Prints one PASS/FAIL line per criterion; `--criterion k`
// runs a single one. Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <cstring>
#include <map>
#include <sys/wait.h>
#include <thread>

#include "entc/coherent.hpp"
#include "entc/dataset.hpp"
#include "entc/eval.hpp"
#include "entc/known_states.hpp"
#include "entc/measures.hpp"
#include "entc/mlp.hpp"

using namespace entc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

DensityMatrix ket(const std::vector<std::string>& terms) {
  const int n = static_cast<int>(terms.front().size());
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << n);
  for (const auto& t : terms) psi(std::stoi(t, nullptr, 2)) += 1.0;
  return DensityMatrix::from_pure(psi);
}

// Records `ok` and appends a note when it fails.
void expect(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

void expect_close(Outcome& o, double got, double want, double tol, const std::string& what) {
  expect(o, std::abs(got - want) <= tol, what + " = " + fmt("%.9g", got) + " (want " + fmt("%.9g", want) + ")");
}

void runtime(Outcome& o, const Timer& t, double limit) {
  const double s = t.seconds();
  expect(o, s < limit, "runtime " + fmt("%.2f", s) + " s exceeds " + fmt("%.0f", limit) + " s");
  if (o.pass) o.detail = "runtime " + fmt("%.2f", s) + " s";
}

Outcome measure_anchors() {
  Timer t;
  Outcome o;
  const auto bell = ket({"00", "11"});
  const auto product = ket({"00"});
  const auto ghz3 = ket({"000", "111"});
  const auto w3 = ket({"001", "010", "100"});
  const auto ghz4 = ket({"0000", "1111"});
  const auto w4 = ket({"0001", "0010", "0100", "1000"});
  expect_close(o, measures::wootters_concurrence(bell), 1.0, 1e-6, "wootters(Bell)");
  expect_close(o, measures::wootters_concurrence(product), 0.0, 1e-6, "wootters(product)");
  expect_close(o, measures::i_concurrence(ghz3, Bipartition::from_left({0}, 3)), 1.0, 1e-6, "i_concurrence(GHZ3)");
  expect_close(o, measures::tau3_pure(ghz3), 1.0, 1e-6, "tau3_pure(GHZ3)");
  expect_close(o, measures::tau3_pure(w3), 0.0, 1e-6, "tau3_pure(W3)");
  expect_close(o, measures::tau2(w3), 4.0 / 9.0, 1e-6, "tau2(W3)");
  expect_close(o, measures::tau4_pure(w4), 0.0, 1e-6, "tau4_pure(W4)");
  expect_close(o, measures::tau4_pure(ghz4), measures::tau1(ghz4), 1e-3, "tau4_pure(GHZ4) - tau1(GHZ4)");
  runtime(o, t, 1.0);
  return o;
}

Outcome ratio_relations() {
  Timer t;
  Outcome o;
  auto check = [&](const DensityMatrix& rho, double factor, const std::string& name) {
    const auto tv = measures::tangle_vector(rho);
    const double rel = std::abs(tv.tau1 - factor * tv.tau2) / (factor * tv.tau2);
    expect(o, rel <= 0.02, name + " tau1/tau2 = " + fmt("%.6f", tv.tau1 / tv.tau2));
  };
  using coherent::Family;
  check(coherent::build_computational(Family::W3), 2.0, "W3");
  check(coherent::build_computational(Family::W4), 3.0, "W4");
  check(coherent::build_representative({3.0, Family::W3}), 2.0, "W3(alpha=3)");
  check(coherent::build_representative({3.0, Family::W4}), 3.0, "W4(alpha=3)");
  runtime(o, t, 5.0);
  return o;
}

Outcome golden_suite() {
  Timer t;
  Outcome o;
  int agree = 0, total = 0;
  std::string misses;
  for (const auto& ks : known_states()) {
    const auto label = classify::label(measures::tangle_vector(ks.state));
    ++total;
    if (label == ks.reference) {
      ++agree;
    } else {
      misses += " " + ks.name + "(" + label.name() + " vs " + ks.reference.name() + ")";
    }
  }
  expect(o, agree == total, std::to_string(agree) + "/" + std::to_string(total) + " rows; differing:" + misses);
  runtime(o, t, 10.0);
  if (o.pass) o.detail = std::to_string(agree) + "/" + std::to_string(total) + " rows, " + o.detail;
  return o;
}

Outcome mixture_transition() {
  Timer t;
  Outcome o;
  double flip = -1.0;
  int transitions = 0;
  std::string prev;
  for (int i = 0; i <= 100; ++i) {
    const double b = i / 100.0;
    const auto name = classify::label(measures::tangle_vector(coherent::mix3(b, 3.0))).name();
    if (i == 0) expect(o, name == "[3]_2", "rho(0) is " + name);
    if (i > 0 && name != prev) {
      ++transitions;
      if (prev == "[3]_2" && name == "[3]_3") flip = b;
    }
    prev = name;
  }
  expect(o, transitions == 1 && flip >= 0.25 && flip <= 0.35,
         "flip at b = " + fmt("%.2f", flip) + " with " + std::to_string(transitions) + " label changes");

  struct Case {
    double a, b, c;
    const char* want;
  };
  for (const Case& c : {Case{1.0 / 3, 1.0 / 3, 1.0 / 3, "[4]_4"}, Case{0.1, 0.8, 0.1, "[4]_2"},
                        Case{0.1, 0.1, 0.8, "[4]_3"}}) {
    for (std::optional<double> alpha : {std::optional<double>{}, std::optional<double>{3.0}}) {
      const double s = c.a + c.b + c.c;
      const auto rho = coherent::mix4(c.a / s, c.b / s, 1.0 - c.a / s - c.b / s, alpha);
      const auto name = classify::label(measures::tangle_vector(rho)).name();
      expect(o, name == c.want,
             "mix4(" + fmt("%.2f", c.a) + "," + fmt("%.2f", c.b) + "," + fmt("%.2f", c.c) + (alpha ? ", alpha=3" : "") +
                 ") is " + name);
    }
  }
  const std::string flip_note = "flip at b = " + fmt("%.2f", flip);
  runtime(o, t, 60.0);
  if (o.pass) o.detail = flip_note + ", " + o.detail;
  return o;
}

Outcome lower_bound_consistency() {
  Timer t;
  Outcome o;
  double worst = -1.0;
  for (int n = 3; n <= 4; ++n) {
    for (int i = 0; i < 200; ++i) {
      Rng rng = stream_rng(500 + n, i);
      const auto psi = random_pure(n, rng);
      for (const auto& cut : measures::bipartitions(n)) {
        const double ic = measures::i_concurrence(psi, cut);
        worst = std::max(worst, measures::lb_concurrence_sq(psi, cut) - ic * ic);
      }
    }
  }
  expect(o, worst <= 1e-6, "lb - i_concurrence^2 reaches " + fmt("%.3g", worst));
  double gap = 0.0;
  for (int i = 0; i < 200; ++i) {
    Rng rng = stream_rng(502, i);
    const auto rho = random_mixed(2, rng);
    const double c = measures::wootters_concurrence(rho);
    gap = std::max(gap, std::abs(measures::lb_concurrence_sq(rho, Bipartition::from_left({0}, 2)) - c * c));
  }
  expect(o, gap <= 1e-8, "|lb - wootters^2| reaches " + fmt("%.3g", gap));
  if (o.pass) o.detail = "max lb - C_I^2 = " + fmt("%.2g", worst) + ", max |lb - C^2| = " + fmt("%.2g", gap);
  return o;
}

Outcome local_unitary_invariance() {
  Outcome o;
  std::string breakdown;
  double overall = 0.0;
  for (int n = 2; n <= 4; ++n) {
    double worst[2] = {0.0, 0.0};  // pure, mixed
    for (int i = 0; i < 200; ++i) {
      Rng rng = stream_rng(600 + n, i);
      const int mixed = i % 2;
      const auto rho = mixed ? random_mixed(n, rng) : random_pure(n, rng);
      const auto moved = conjugate(rho, random_local_unitary(n, rng));
      const auto a = measures::tangle_vector(rho), b = measures::tangle_vector(moved);
      worst[mixed] = std::max({worst[mixed], std::abs(a.tau1 - b.tau1), std::abs(a.tau2 - b.tau2),
                               std::abs(a.tau3.value_or(0) - b.tau3.value_or(0)),
                               std::abs(a.tau4.value_or(0) - b.tau4.value_or(0))});
    }
    overall = std::max({overall, worst[0], worst[1]});
    breakdown += " n=" + std::to_string(n) + " pure " + fmt("%.2g", worst[0]) + " mixed " + fmt("%.2g", worst[1]) + ";";
  }
  breakdown.pop_back();
  expect(o, overall <= 2e-3, "largest tangle change " + fmt("%.3g", overall) + " (" + breakdown.substr(1) + ")");
  if (o.pass) o.detail = "largest tangle change " + fmt("%.2g", overall) + " (" + breakdown.substr(1) + ")";
  return o;
}

Outcome gradient_check() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto model = mlp::init_model({32, 16, 8, 2}, seed);
    Rng rng = stream_rng(seed, 7);
    std::normal_distribution<double> g;
    Eigen::VectorXd x(32);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    const auto gc = mlp::gradient_check(model, x, static_cast<int>(seed % 2), seed, 64);
    expect(o, gc.checked >= 16, "only " + std::to_string(gc.checked) + " parameters compared");
    worst = std::max(worst, gc.max_relative_error);
  }
  expect(o, worst < 1e-5, "max relative error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max relative error " + fmt("%.2g", worst) + " over 5 seeds";
  return o;
}

struct MlRun {
  int qubits;
  PurityKind purity;
  int per_class;
  double bar;  // < 0: reported only
};

double ml_accuracy(const MlRun& run, std::string& log) {
  Timer t;
  dataset::GenerateConfig gc;
  gc.qubit_count = run.qubits;
  gc.per_class = run.per_class;
  gc.purity = run.purity;
  gc.seed = 1;
  gc.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto data = dataset::generate(gc);
  const auto parts = dataset::split(data, 0.8, 1);
  mlp::TrainConfig tc;
  tc.seed = 1;
  const auto model = mlp::train(parts.train, tc).model;
  const double acc = eval::accuracy(eval::confusion(model, parts.test, gc.threads));
  log += "\n    n=" + std::to_string(run.qubits) + (run.purity == PurityKind::Pure ? " pure " : " mixed") + ": " +
         std::to_string(parts.train.records.size()) + " train / " + std::to_string(parts.test.records.size()) +
         " test, accuracy " + fmt("%.4f", acc) + (run.bar > 0 ? " (bar " + fmt("%.2f", run.bar) + ")" : "") + ", " +
         fmt("%.0f", t.seconds()) + " s";
  std::cout.flush();
  return acc;
}

Outcome ml_performance() {
  Outcome o;
  std::string log;
  const std::vector<MlRun> runs{{2, PurityKind::Pure, 5000, 0.97},  {2, PurityKind::Mixed, 5000, 0.90},
                                {3, PurityKind::Pure, 10000, 0.75}, {4, PurityKind::Pure, 5000, 0.75},
                                {3, PurityKind::Mixed, 10000, -1},  {4, PurityKind::Mixed, 5000, -1}};
  std::map<std::pair<int, int>, double> acc;
  for (const auto& r : runs) {
    const double a = ml_accuracy(r, log);
    acc[{r.qubits, static_cast<int>(r.purity)}] = a;
    if (r.bar > 0) expect(o, a >= r.bar, "n=" + std::to_string(r.qubits) + " accuracy " + fmt("%.4f", a));
  }
  for (int n = 2; n <= 4; ++n) {
    expect(o, acc[{n, 0}] > acc[{n, 1}], "n=" + std::to_string(n) + " mixed is not below pure");
  }
  expect(o, acc[{3, 1}] > acc[{4, 1}], "n=3 mixed is not above n=4 mixed");
  o.detail += log;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENTC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = fs::temp_directory_path() / "entc_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };
  for (const char* f : {"a.entc", "b.entc"}) {
    expect(o, run_cli("--seed 7 gen --qubits 3 --per-class 200 --purity mixed --out " + p(f)) == 0, "gen failed");
  }
  expect(o, slurp(p("a.entc")) == slurp(p("b.entc")), "gen outputs differ");
  for (const char* f : {"a.json", "b.json"}) {
    expect(o, run_cli("--seed 7 train --data " + p("a.entc") + " --epochs 5 --out " + p(f)) == 0, "train failed");
  }
  expect(o, slurp(p("a.json")) == slurp(p("b.json")), "train outputs differ");
  expect(o, !slurp(p("a.json")).empty() && !slurp(p("a.entc")).empty(), "empty artifacts");
  if (o.pass) o.detail = "gen and train artifacts byte-identical";
  fs::remove_all(dir);
  return o;
}

Outcome round_trip() {
  Outcome o;
  const auto dir = fs::temp_directory_path() / "entc_acceptance_rt";
  fs::remove_all(dir);
  fs::create_directories(dir);
  dataset::GenerateConfig gc;
  gc.qubit_count = 3;
  gc.per_class = 34;
  gc.purity = PurityKind::Mixed;
  gc.seed = 3;
  auto data = dataset::generate(gc);
  data.records.erase(data.records.begin() + 100, data.records.end());
  data.header.record_count = 100;
  mlp::TrainConfig tc;
  tc.hidden = {32, 16};
  tc.epochs = 5;
  tc.seed = 3;
  const auto model = mlp::train(data, tc).model;

  dataset::write_dataset(dir / "probe.entc", data);
  mlp::save_model(dir / "model.json", model);
  const auto data2 = dataset::read_dataset(dir / "probe.entc");
  const auto model2 = mlp::load_model(dir / "model.json");
  int identical = 0;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto a = mlp::predict(model, data.records[i].state).probabilities;
    const auto b = mlp::predict(model2, data2.records[i].state).probabilities;
    bool same = a.size() == b.size();
    for (Eigen::Index k = 0; same && k < a.size(); ++k) same = std::memcmp(&a(k), &b(k), sizeof(double)) == 0;
    identical += same;
  }
  expect(o, identical == 100, std::to_string(identical) + "/100 probe predictions bit-identical");
  if (o.pass) o.detail = "100/100 probe predictions bit-identical";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"measure anchors", measure_anchors},
      {"ratio relations", ratio_relations},
      {"classification golden suite", golden_suite},
      {"mixture transition", mixture_transition},
      {"lower-bound consistency", lower_bound_consistency},
      {"local-unitary invariance", local_unitary_invariance},
      {"gradient check", gradient_check},
      {"ML performance", ml_performance},
      {"determinism", determinism},
      {"format round-trip", round_trip},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") only = std::atoi(argv[2]);
  if (argc != 1 && (only < 1 || only > static_cast<int>(criteria.size()))) {
    std::cerr << "usage: acceptance [--criterion 1..10]\n";
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
