#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

#include "entc/dataset.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "entc_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (workdir() / name).string(); }

Run cli(const std::string& args) {
  const std::string cmd = std::string(ENTC_CLI) + " " + args + " 2>" + at("stderr.txt");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_state(const std::string& path, int n, const std::vector<std::vector<double>>& real) {
  json rows = json::array();
  for (const auto& r : real) {
    json row = json::array();
    for (double v : r) row.push_back({{"re", v}, {"im", 0.0}});
    rows.push_back(row);
  }
  std::ofstream(path) << json{{"n_qubits", n}, {"matrix", rows}}.dump();
}

std::vector<std::vector<double>> projector(int n, const std::vector<int>& support) {
  const std::size_t d = std::size_t{1} << n;
  std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
  for (int a : support)
    for (int b : support) m[a][b] = 1.0 / support.size();
  return m;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("gen --qubits 5 --out " + at("x.entc")).code == 2);
  CHECK(cli("gen --qubits 2").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("gen writes the requested records and is reproducible") {
  const auto a = at("a.entc"), b = at("b.entc");
  REQUIRE(cli("gen --qubits 2 --per-class 100 --purity pure --seed 1 --out " + a).code == 0);
  REQUIRE(cli("--threads 2 gen --qubits 2 --per-class 100 --purity pure --seed 1 --out " + b).code == 0);
  CHECK(entc::dataset::read_dataset(a).records.size() == 200);
  CHECK(slurp(a) == slurp(b));
  const auto summary = json::parse(slurp(a + ".json"));
  CHECK(summary["counts"]["SEP"] == 100);
  CHECK(summary["counts"]["ENT"] == 100);
  CHECK(slurp(at("stderr.txt")).find("\"per_class\":100") != std::string::npos);
}

TEST_CASE("label prints tangles and the class") {
  const auto ghz = at("ghz.json");
  write_state(ghz, 3, projector(3, {0, 7}));
  auto r = cli("label --in " + ghz);
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["label"] == "[3]_3");
  CHECK(j["tangles"]["tau1"].get<double>() == doctest::Approx(1.0));
  CHECK(j["tangles"]["tau4"].is_null());

  const auto prod = at("prod.json");
  write_state(prod, 2, projector(2, {0}));
  r = cli("label --in " + prod);
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["label"] == "SEP");
}

TEST_CASE("invalid states exit with 4 naming the invariant") {
  auto m = projector(2, {0});
  m[0][0] = 1.5;
  m[1][1] = -0.5;
  const auto bad = at("bad.json");
  write_state(bad, 2, m);
  CHECK(cli("label --in " + bad).code == 4);
  CHECK(slurp(at("stderr.txt")).find("positive semidefinite") != std::string::npos);

  m = projector(2, {0});
  m[0][1] = 0.3;
  write_state(bad, 2, m);
  CHECK(cli("label --in " + bad).code == 4);
  CHECK(slurp(at("stderr.txt")).find("hermiticity") != std::string::npos);

  std::ofstream(bad) << "{\"n_qubits\": 2, \"matrix\": [[1]]}";
  CHECK(cli("label --in " + bad).code == 4);
}

TEST_CASE("missing files exit with 5") {
  CHECK(cli("label --in " + at("nope.json")).code == 5);
  CHECK(cli("train --data " + at("nope.entc") + " --out " + at("m.json")).code == 5);
  CHECK(cli("split --in " + at("nope.entc") + " --train-out a --test-out b").code == 5);
  CHECK(cli("verify --models " + at("no-such-dir")).code == 5);
}

TEST_CASE("corrupt dataset exits with 5 and reports the offset") {
  const auto p = at("corrupt.entc");
  std::ofstream(p) << "XXXXgarbage-garbage-garbage-garbage-garbage";
  CHECK(cli("split --in " + p + " --train-out " + at("t1") + " --test-out " + at("t2")).code == 5);
  CHECK(slurp(at("stderr.txt")).find("byte offset 0") != std::string::npos);
}

TEST_CASE("small pipeline: gen, split, train, eval, verify") {
  const auto d = at("p.entc"), tr = at("p_train.entc"), te = at("p_test.entc");
  const auto models = workdir() / "models";
  fs::create_directories(models);
  const auto m = (models / "n2_pure.json").string();
  REQUIRE(cli("--seed 4 gen --qubits 2 --per-class 400 --purity pure --out " + d).code == 0);
  REQUIRE(cli("--seed 4 split --in " + d + " --train-out " + tr + " --test-out " + te).code == 0);
  CHECK(entc::dataset::read_dataset(tr).records.size() == 640);
  CHECK(entc::dataset::read_dataset(te).records.size() == 160);
  REQUIRE(cli("--seed 4 train --data " + tr + " --hidden 32,16 --epochs 20 --out " + m).code == 0);
  const auto report = at("report.json");
  REQUIRE(cli("eval --data " + te + " --model " + m + " --report " + report).code == 0);
  const auto j = json::parse(slurp(report));
  CHECK(j["n_test"] == 160);
  CHECK(j["accuracy"].get<double>() > 0.8);

  const auto m2 = (models / "again.json.bak").string();
  REQUIRE(cli("--seed 4 train --data " + tr + " --hidden 32,16 --epochs 20 --out " + m2).code == 0);
  CHECK(slurp(m) == slurp(m2));

  const auto r = cli("verify --models " + models.string() + " --report " + at("verify.json"));
  REQUIRE(r.code == 0);
  const auto rows = json::parse(slurp(at("verify.json")));
  CHECK(rows.size() == 28);
  CHECK(rows[0]["prediction"].is_string());
  CHECK(rows[10]["prediction"].is_null());
  CHECK(slurp(at("stderr.txt")).find("no 3-qubit model") != std::string::npos);
}

TEST_CASE("training divergence exits with 6") {
  const auto d = at("div.entc");
  REQUIRE(cli("gen --qubits 2 --per-class 50 --out " + d).code == 0);
  CHECK(cli("train --data " + d + " --hidden 8 --epochs 5 --lr 1e308 --out " + at("div.json")).code == 6);
}

TEST_CASE("curves: GHZ3 keeps tau2 below epsilon for separated coherent states") {
  const auto out = at("c.csv");
  REQUIRE(cli("curves --family ghz3,w3 --alpha 1.6:3.0:15 --out " + out).code == 0);
  std::ifstream is(out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "family,param,tau1,tau2,tau3,tau4,label");
  int ghz_rows = 0;
  while (std::getline(is, line)) {
    if (line.rfind("ghz3,", 0) != 0) continue;
    ++ghz_rows;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    CHECK(std::stod(cells[3]) < 1e-4);
  }
  CHECK(ghz_rows == 15);
  CHECK(cli("curves --family ghz3 --alpha 3:1:5 --out " + out).code == 2);
}
