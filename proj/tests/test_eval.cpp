#include <doctest.h>

#include <cstdint>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

#include "edclust/eval.hpp"
#include "edclust/parallel.hpp"

using edclust::KMode;
using edclust::MethodSpec;
using edclust::Partition;
using edclust::Scenario;
using edclust::SimSpec;

TEST_CASE("similarity index hand values") {
  Partition g{{1, 1, 2, 2}};
  CHECK(edclust::similarity_index(g, g) == 1.0);

  Partition relabeled{{2, 2, 1, 1}};
  CHECK(edclust::similarity_index(g, relabeled) == 1.0);

  // one element moved: clusters {a,b},{c,d} vs {a,b,c},{d}
  Partition moved{{1, 1, 1, 2}};
  // G1 = {a,b}: best overlap with A1 = 2 -> 2*2/(2+3) = 0.8
  // G2 = {c,d}: overlaps 1 with both -> max(2/(2+3), 2/(2+1)) = 2/3
  CHECK(edclust::similarity_index(g, moved) == doctest::Approx(0.5 * (0.8 + 2.0 / 3.0)));

  // everything lumped together: (1/2)(2*2/(2+4) + 2*2/(2+4)) = 2/3
  Partition lump{{1, 1, 1, 1}};
  CHECK(edclust::similarity_index(g, lump) == doctest::Approx(2.0 / 3.0));

  // complete splits score 1/K sum 2/(|G_i|+1)
  Partition split{{1, 2, 3, 4}};
  CHECK(edclust::similarity_index(g, split) == doctest::Approx(2.0 / 3.0));

  Partition wrong_size{{1, 2, 1}};
  CHECK_THROWS_AS(edclust::similarity_index(g, wrong_size), std::invalid_argument);
}

TEST_CASE("similarity index invariances") {
  Partition g{{1, 2, 3, 1, 2, 3, 1, 2}};
  Partition a{{1, 1, 2, 3, 2, 2, 3, 1}};
  double base = edclust::similarity_index(g, a);
  CHECK(base > 0.0);
  CHECK(base <= 1.0);

  // relabeling the candidate never changes the score
  Partition relabeled{{3, 3, 1, 2, 1, 1, 2, 3}};
  CHECK(edclust::similarity_index(g, relabeled) == base);

  // the index is asymmetric in general (K differs between the two sides)
  Partition two{{1, 1, 2, 2}};
  Partition three{{1, 2, 3, 3}};
  CHECK(edclust::similarity_index(two, three) == doctest::Approx(5.0 / 6.0));
  CHECK(edclust::similarity_index(three, two) == doctest::Approx(7.0 / 9.0));
}

TEST_CASE("summaries use type-7 quantiles") {
  std::vector<double> vals = {4.0, 1.0, 3.0, 2.0};
  auto s = edclust::summarize(vals);
  CHECK(s.mean == 2.5);
  CHECK(s.median == 2.5);
  CHECK(s.q1 == 1.75);
  CHECK(s.q3 == 3.25);
  CHECK(s.min_value == 1.0);
  CHECK(s.max_value == 4.0);

  std::vector<double> one = {0.7};
  auto s1 = edclust::summarize(one);
  CHECK(s1.median == 0.7);
  CHECK(s1.q1 == 0.7);
  CHECK(s1.q3 == 0.7);

  std::vector<double> five = {10, 20, 30, 40, 50};
  auto s5 = edclust::summarize(five);
  CHECK(s5.median == 30.0);
  CHECK(s5.q1 == 20.0);
  CHECK(s5.q3 == 40.0);

  CHECK_THROWS_AS(edclust::summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("method tokens round-trip") {
  for (const char* token : {"energy-h0", "energy-h1", "energy-h2", "energy-sum-h3", "acf-L10",
                            "pacf-L5", "per", "per-lp", "int-per"}) {
    auto spec = MethodSpec::parse(token);
    CHECK(spec.label() == token);
  }
  CHECK(MethodSpec::parse("energy-h2").kind == MethodSpec::Kind::EnergyJoint);
  CHECK(MethodSpec::parse("energy-h2").lag == 2);
  CHECK(MethodSpec::parse("energy-sum-h2").kind == MethodSpec::Kind::EnergySum);
  CHECK(MethodSpec::parse("acf-L7").max_lag == 7);

  for (const char* bad : {"energy", "energy-h", "acf", "acf-L0", "energy-h-1", "spectral", ""})
    CHECK_THROWS_AS(MethodSpec::parse(bad), std::invalid_argument);
}

TEST_CASE("experiment runs are deterministic and method-isolated") {
  SimSpec spec;
  spec.scenario = Scenario::Nonlinear16;
  spec.n = 100;

  std::vector<MethodSpec> both = {MethodSpec::parse("energy-h1"), MethodSpec::parse("acf-L10")};
  auto a = edclust::run_experiment(spec, both, 4, 11, KMode::KnownK0);
  auto b = edclust::run_experiment(spec, both, 4, 11, KMode::KnownK0);
  REQUIRE(a.methods.size() == 2);
  CHECK(a.methods[0].scores == b.methods[0].scores);
  CHECK(a.methods[1].scores == b.methods[1].scores);
  CHECK(a.reps == 4);

  for (const auto& m : a.methods)
    for (double s : m.scores) {
      CHECK(s > 0.0);
      CHECK(s <= 1.0);
    }

  // dropping a method leaves the others' replicate scores untouched
  std::vector<MethodSpec> solo = {MethodSpec::parse("energy-h1")};
  auto c = edclust::run_experiment(spec, solo, 4, 11, KMode::KnownK0);
  CHECK(c.methods[0].scores == a.methods[0].scores);

  // thread count must not leak into results
  edclust::set_max_threads(1);
  auto serial = edclust::run_experiment(spec, both, 4, 11, KMode::KnownK0);
  edclust::set_max_threads(4);
  auto threaded = edclust::run_experiment(spec, both, 4, 11, KMode::KnownK0);
  edclust::set_max_threads(0);
  CHECK(serial.methods[0].scores == threaded.methods[0].scores);
  CHECK(serial.methods[1].scores == threaded.methods[1].scores);

  // different base seeds give different replicate panels
  auto d = edclust::run_experiment(spec, solo, 4, 12, KMode::KnownK0);
  CHECK(c.methods[0].scores != d.methods[0].scores);

  auto sil = edclust::run_experiment(spec, solo, 2, 11, KMode::Silhouette);
  for (double s : sil.methods[0].scores) CHECK(s > 0.0);

  CHECK_THROWS_AS(edclust::run_experiment(spec, both, 0, 11, KMode::KnownK0),
                  std::invalid_argument);
  CHECK_THROWS_AS(edclust::run_experiment(spec, {}, 4, 11, KMode::KnownK0),
                  std::invalid_argument);
}

TEST_CASE("reports serialize to json and csv") {
  SimSpec spec;
  spec.scenario = Scenario::Nonlinear16;
  spec.n = 80;
  std::vector<MethodSpec> methods = {MethodSpec::parse("acf-L10"), MethodSpec::parse("per")};
  auto report = edclust::run_experiment(spec, methods, 3, 5, KMode::KnownK0);

  std::string json_text = edclust::report_to_json(report);
  CHECK(json_text == edclust::report_to_json(report));  // byte-stable
  auto doc = nlohmann::json::parse(json_text);
  CHECK(doc["schema"] == "edclust-benchmark-report/1");
  CHECK(doc["config"]["scenario"] == "nonlinear16");
  CHECK(doc["config"]["reps"] == 3);
  CHECK(doc["config"]["base_seed"] == 5);
  CHECK(doc["config"]["k_mode"] == "known");
  REQUIRE(doc["methods"].size() == 2);
  CHECK(doc["methods"][0]["method"] == "acf-L10");
  CHECK(doc["methods"][0]["scores"].size() == 3);
  CHECK(doc["methods"][0]["summary"].contains("median"));
  CHECK(doc["methods"][0]["summary"].contains("q3"));

  std::string csv = edclust::report_scores_csv(report);
  std::size_t lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == 1 + 2 * 3);  // header + methods x reps
  CHECK(csv.rfind("method,replicate,similarity\n", 0) == 0);
  CHECK(csv.find("acf-L10,0,") != std::string::npos);
  CHECK(csv.find("per,2,") != std::string::npos);
}
