#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edclust/eval.hpp"
#include "edclust/io.hpp"
#include "edclust/rng.hpp"
#include "edclust/simgen.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("EDCLUST_CLI");
  REQUIRE_MESSAGE(env != nullptr, "EDCLUST_CLI must point at the edclust binary");
  return env;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("edclust_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli reports version and rejects bad usage") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);                                // missing subcommand
  CHECK(run_cli("frobnicate") == 2);                      // unknown subcommand
  CHECK(run_cli("simulate") == 2);                        // missing required flags
  CHECK(run_cli("cluster --no-such-flag") == 2);          // unknown flag
  TempDir dir;
  CHECK(run_cli("simulate --scenario marma -o " + (dir.path / "x").string()) == 2);
  CHECK(run_cli("cluster -i missing.csv -o " + (dir.path / "y").string()) == 3);
}

TEST_CASE("simulate writes a reloadable panel and ground truth") {
  TempDir dir;
  fs::path out = dir.path / "sim";
  CHECK(run_cli("simulate --scenario nonlinear16 --seed 7 --length 120 -o " + out.string()) == 0);

  auto panel = edclust::read_panel_csv(out / "panel.csv");
  CHECK(panel.values.rows() == 120);
  CHECK(panel.values.cols() == 16);

  edclust::SimSpec spec;
  spec.scenario = edclust::Scenario::Nonlinear16;
  spec.n = 120;
  spec.seed = 7;
  auto direct = edclust::build_experiment(spec);
  CHECK(panel.names == direct.panel.names);
  CHECK(panel.values == direct.panel.values);  // g17 round trip is exact

  auto truth = nlohmann::json::parse(slurp(out / "ground_truth.json"));
  CHECK(truth["schema"] == "edclust-ground-truth/1");
  CHECK(truth["k0"] == 4);
  REQUIRE(truth["labels"].size() == 16);
  CHECK(truth["labels"][0] == 1);
  CHECK(truth["labels"][15] == 4);
  CHECK(truth["names"][0] == "tar_1");

  // same invocation reproduces the files byte for byte
  fs::path again = dir.path / "sim2";
  CHECK(run_cli("simulate --scenario nonlinear16 --seed 7 --length 120 -o " + again.string()) ==
        0);
  CHECK(slurp(out / "panel.csv") == slurp(again / "panel.csv"));
}

TEST_CASE("cluster recovers planted structure end to end") {
  TempDir dir;
  fs::path sim = dir.path / "sim";
  REQUIRE(run_cli("simulate --scenario nonlinear16 --seed 42 -o " + sim.string()) == 0);

  fs::path out = dir.path / "clust";
  CHECK(run_cli("cluster -i " + (sim / "panel.csv").string() + " --lag 1 --clusters 4 -o " +
                out.string()) == 0);

  auto part = nlohmann::json::parse(slurp(out / "partition.json"));
  CHECK(part["schema"] == "edclust-partition/1");
  CHECK(part["k"] == 4);
  REQUIRE(part["labels"].size() == 16);

  auto truth = nlohmann::json::parse(slurp(sim / "ground_truth.json"));
  edclust::Partition ground{truth["labels"].get<std::vector<int>>()};
  edclust::Partition found{part["labels"].get<std::vector<int>>()};
  CHECK(edclust::similarity_index(ground, found) == 1.0);

  auto dend = nlohmann::json::parse(slurp(out / "dendrogram.json"));
  CHECK(dend["schema"] == "edclust-dendrogram/1");
  CHECK(dend["leaves"].size() == 16);
  CHECK(dend["merges"].size() == 15);

  std::string newick = slurp(out / "dendrogram.newick");
  CHECK(newick.find("tar_1:") != std::string::npos);

  std::string matrix_csv = slurp(out / "dissimilarity.csv");
  CHECK(matrix_csv.find("name,tar_1,") != std::string::npos);

  // silhouette-selected K on the same panel also finds 4 groups
  fs::path out_auto = dir.path / "clust_auto";
  CHECK(run_cli("cluster -i " + (sim / "panel.csv").string() + " --lag 1 -o " +
                out_auto.string()) == 0);
  auto part_auto = nlohmann::json::parse(slurp(out_auto / "partition.json"));
  CHECK(part_auto["k_mode"] == "auto");
  CHECK(part_auto["k"] == 4);
  CHECK(part_auto["silhouette_by_k"].size() == 9);  // K = 2..10
}

TEST_CASE("cluster merges duplicated components first at height zero") {
  TempDir dir;
  edclust::TimeSeriesPanel panel;
  panel.values.resize(40, 4);
  edclust::PhiloxStream rng(3, 0);
  for (int t = 0; t < 40; ++t)
    for (int j = 0; j < 4; ++j) panel.values(t, j) = rng.next_normal();
  panel.values.col(1) = panel.values.col(0);
  panel.names = {"dup_a", "dup_b", "other_1", "other_2"};
  edclust::write_text_atomic(dir.path / "panel.csv", edclust::panel_to_csv(panel, {}));

  fs::path out = dir.path / "out";
  CHECK(run_cli("cluster -i " + (dir.path / "panel.csv").string() + " --clusters 2 -o " +
                out.string()) == 0);
  auto dend = nlohmann::json::parse(slurp(out / "dendrogram.json"));
  CHECK(dend["merges"][0]["left"] == 0);
  CHECK(dend["merges"][0]["right"] == 1);
  CHECK(dend["merges"][0]["height"] == 0.0);
}

TEST_CASE("cluster honors transforms and validates their domain") {
  TempDir dir;
  edclust::TimeSeriesPanel panel;
  panel.values.resize(30, 2);
  edclust::PhiloxStream rng(5, 0);
  for (int t = 0; t < 30; ++t) {
    panel.values(t, 0) = 100.0 * std::exp(0.01 * t + 0.02 * rng.next_normal());
    panel.values(t, 1) = 50.0 * std::exp(-0.01 * t + 0.02 * rng.next_normal());
  }
  panel.names = {"up", "down"};
  edclust::write_text_atomic(dir.path / "gdp.csv", edclust::panel_to_csv(panel, {}));

  fs::path out = dir.path / "out";
  CHECK(run_cli("cluster -i " + (dir.path / "gdp.csv").string() +
                " --transform log_growth_then_normalize --clusters 2 -o " + out.string()) == 0);

  // negative levels cannot be log-differenced
  panel.values(10, 0) = -1.0;
  edclust::write_text_atomic(dir.path / "neg.csv", edclust::panel_to_csv(panel, {}));
  CHECK(run_cli("cluster -i " + (dir.path / "neg.csv").string() +
                " --transform log_growth -o " + out.string()) == 3);

  CHECK(run_cli("cluster -i " + (dir.path / "gdp.csv").string() +
                " --transform sqrt -o " + out.string()) == 2);
  CHECK(run_cli("cluster -i " + (dir.path / "gdp.csv").string() +
                " --clusters 99 -o " + out.string()) == 2);
  CHECK(run_cli("cluster -i " + (dir.path / "gdp.csv").string() +
                " --clusters nine -o " + out.string()) == 2);
}

TEST_CASE("benchmark writes a parseable report") {
  TempDir dir;
  fs::path out = dir.path / "bm";
  CHECK(run_cli("benchmark --scenario nonlinear16 --length 80 --reps 2 --seed 3"
                " --methods energy-h1,acf-L10 -o " +
                out.string()) == 0);

  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["schema"] == "edclust-benchmark-report/1");
  CHECK(report["config"]["methods"] == nlohmann::json::array({"energy-h1", "acf-L10"}));
  REQUIRE(report["methods"].size() == 2);
  CHECK(report["methods"][0]["scores"].size() == 2);

  std::string scores = slurp(out / "scores.csv");
  CHECK(scores.find("method,replicate,similarity\n") != std::string::npos);
  CHECK(scores.find("energy-h1,0,") != std::string::npos);

  CHECK(run_cli("benchmark --scenario nonlinear16 --methods '' -o " + out.string()) == 2);
  CHECK(run_cli("benchmark --scenario nonlinear16 --methods energy-h1 --reps 0 -o " +
                out.string()) == 2);
  CHECK(run_cli("benchmark --scenario nonlinear16 --methods no-such-method -o " +
                out.string()) == 2);
}
