// edclust: cluster the component series of a multivariate time series with
// energy-distance dissimilarities, simulate benchmark scenarios, and run
// method comparisons.
//
// Exit codes: 0 success, 2 usage error, 3 data/processing error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edclust/baselines.hpp"
#include "edclust/eval.hpp"
#include "edclust/hclust.hpp"
#include "edclust/io.hpp"
#include "edclust/parallel.hpp"
#include "edclust/simgen.hpp"
#include "edclust/version.hpp"

namespace {

using nlohmann::ordered_json;

// Flag misuse detected after CLI11 parsing (e.g. a malformed method token).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClusterArgs {
  std::string input;
  std::string out_dir;
  std::string transform = "none";
  std::string mode = "joint";
  int lag = 1;
  std::string method = "energy";
  int acf_max_lag = 10;
  double acf_weight = 0.05;
  std::string clusters = "auto";
  int k_max = 0;  // 0: min(d-1, 10)
  int threads = 0;
};

struct SimulateArgs {
  std::string scenario;
  std::string out_dir;
  int length = -1;  // -1: scenario default
  std::uint64_t seed = 0;
  int burn_in = 500;
};

struct BenchmarkArgs {
  std::string scenario;
  std::string out_dir;
  std::vector<std::string> methods;
  int length = -1;
  std::uint64_t seed = 0;
  int burn_in = 500;
  int reps = 20;
  std::string k_mode = "known";
  int threads = 0;
};

int scenario_default_length(edclust::Scenario s) {
  return s == edclust::Scenario::Arma20 ? 1000 : 200;
}

// Computation-affecting parameters only: no thread count and no output
// paths, so reruns into other directories or with other --threads values
// stay byte-identical.
ordered_json cluster_config(const ClusterArgs& args) {
  return {{"command", "cluster"},       {"input", args.input},
          {"transform", args.transform}, {"mode", args.mode},
          {"lag", args.lag},             {"method", args.method},
          {"acf_L", args.acf_max_lag},   {"acf_p", args.acf_weight},
          {"clusters", args.clusters},   {"k_max", args.k_max}};
}

ordered_json simulate_config(const SimulateArgs& args, int resolved_length) {
  return {{"command", "simulate"},
          {"scenario", args.scenario},
          {"n", resolved_length},
          {"seed", args.seed},
          {"burn_in", args.burn_in}};
}

ordered_json benchmark_config(const BenchmarkArgs& args, int resolved_length) {
  return {{"command", "benchmark"}, {"scenario", args.scenario}, {"n", resolved_length},
          {"seed", args.seed},      {"burn_in", args.burn_in},   {"reps", args.reps},
          {"methods", args.methods}, {"k_mode", args.k_mode}};
}

edclust::Metadata csv_metadata(const ordered_json& config) {
  return {{"edclust_version", edclust::version_string}, {"config", config.dump()}};
}

std::string newick_comment(const ordered_json& config) {
  // Newick comments end at the first ']', so the config is flattened to
  // key=value tokens with ']' scrubbed from values.
  std::string out = "[ edclust_version=";
  out += edclust::version_string;
  for (const auto& [key, value] : config.items()) {
    std::string rendered = value.is_string() ? value.get<std::string>() : value.dump();
    for (char& c : rendered) {
      if (c == ']' || c == '[') c = '_';
    }
    out += " " + key + "=" + rendered;
  }
  out += " ]\n";
  return out;
}

edclust::TimeSeriesPanel apply_transform(const edclust::TimeSeriesPanel& panel,
                                         const std::string& transform) {
  if (transform == "none") return panel;
  if (transform == "normalize") return edclust::normalize(panel);
  if (transform == "log_growth") return edclust::log_growth(panel);
  if (transform == "log_growth_then_normalize") {
    return edclust::normalize(edclust::log_growth(panel));
  }
  throw UsageError("unknown transform '" + transform + "'");
}

edclust::DissimilarityMatrix compute_matrix(const edclust::TimeSeriesPanel& panel,
                                            const ClusterArgs& args) {
  if (args.method == "energy") {
    if (args.mode == "joint") return edclust::joint_dissimilarity_matrix(panel, args.lag);
    if (args.mode == "bivariate-sum") {
      return edclust::bivariate_sum_dissimilarity_matrix(panel, args.lag);
    }
    throw UsageError("unknown mode '" + args.mode + "'");
  }
  edclust::BaselineSpec spec;
  spec.max_lag = args.acf_max_lag;
  spec.weight_p = args.acf_weight;
  if (args.method == "acf") {
    spec.method = edclust::BaselineMethod::Acf;
  } else if (args.method == "pacf") {
    spec.method = edclust::BaselineMethod::Pacf;
  } else if (args.method == "per") {
    spec.method = edclust::BaselineMethod::Periodogram;
  } else if (args.method == "per-lp") {
    spec.method = edclust::BaselineMethod::LogPeriodogram;
  } else if (args.method == "int-per") {
    spec.method = edclust::BaselineMethod::IntegratedPeriodogram;
  } else {
    throw UsageError("unknown method '" + args.method + "'");
  }
  return edclust::baseline_dissimilarity_matrix(panel, spec);
}

ordered_json silhouette_json(const edclust::SilhouetteReport& report) {
  return {{"k", report.k}, {"average", report.average}, {"s", report.s}};
}

void run_cluster(const ClusterArgs& args) {
  if (!(args.acf_weight > 0.0 && args.acf_weight < 1.0)) {
    throw UsageError("--acf-p must lie strictly between 0 and 1");
  }
  bool auto_k = args.clusters == "auto";
  int fixed_k = 0;
  if (!auto_k) {
    try {
      std::size_t used = 0;
      fixed_k = std::stoi(args.clusters, &used);
      if (used != args.clusters.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--clusters must be an integer or 'auto', got '" + args.clusters + "'");
    }
    if (fixed_k < 1) throw UsageError("--clusters must be >= 1");
  }
  edclust::set_max_threads(args.threads);

  const edclust::TimeSeriesPanel raw = edclust::read_panel_csv(args.input);
  const edclust::TimeSeriesPanel panel = apply_transform(raw, args.transform);
  const edclust::DissimilarityMatrix matrix = compute_matrix(panel, args);
  const edclust::Dendrogram dend = edclust::agglomerate(matrix);

  const int d = static_cast<int>(matrix.size());
  const ordered_json config = cluster_config(args);
  const std::filesystem::path out_dir(args.out_dir);

  edclust::write_text_atomic(out_dir / "dissimilarity.csv",
                             edclust::dissimilarity_to_csv(matrix, panel.names,
                                                           csv_metadata(config)));

  ordered_json dend_doc;
  dend_doc["schema"] = "edclust-dendrogram/1";
  dend_doc["version"] = edclust::version_string;
  dend_doc["config"] = config;
  const ordered_json tree = ordered_json::parse(edclust::dendrogram_to_json(dend, panel.names));
  dend_doc["leaves"] = tree["leaves"];
  dend_doc["merges"] = tree["merges"];
  edclust::write_text_atomic(out_dir / "dendrogram.json", dend_doc.dump(2) + "\n");

  edclust::write_text_atomic(out_dir / "dendrogram.newick",
                             newick_comment(config) +
                                 edclust::dendrogram_to_newick(dend, panel.names));

  edclust::Partition part;
  ordered_json part_doc;
  part_doc["schema"] = "edclust-partition/1";
  part_doc["version"] = edclust::version_string;
  part_doc["config"] = config;
  if (auto_k) {
    const int k_max = args.k_max > 0 ? args.k_max : edclust::default_k_max(d);
    const edclust::KSelection sel = edclust::select_k(dend, matrix, k_max);
    part = edclust::cut(dend, sel.best_k);
    part_doc["k_mode"] = "auto";
    part_doc["k"] = sel.best_k;
    part_doc["silhouette_by_k"] = ordered_json::array();
    for (const edclust::SilhouetteReport& rep : sel.reports) {
      part_doc["silhouette_by_k"].push_back({{"k", rep.k}, {"average", rep.average}});
    }
    part_doc["silhouette"] = silhouette_json(sel.reports[static_cast<std::size_t>(
        part_doc["k"].get<int>() - 2)]);
  } else {
    if (fixed_k > d) throw UsageError("--clusters exceeds the number of components");
    part = edclust::cut(dend, fixed_k);
    part_doc["k_mode"] = "fixed";
    part_doc["k"] = fixed_k;
    if (fixed_k >= 2) {
      part_doc["silhouette"] = silhouette_json(edclust::silhouette(matrix, part));
    }
  }
  part_doc["names"] = panel.names;
  part_doc["labels"] = part.labels;
  edclust::write_text_atomic(out_dir / "partition.json", part_doc.dump(2) + "\n");

  std::cout << "wrote dissimilarity.csv, dendrogram.json, dendrogram.newick, partition.json to "
            << out_dir.string() << "\n";
}

void run_simulate(const SimulateArgs& args) {
  edclust::SimSpec spec;
  spec.scenario = edclust::parse_scenario(args.scenario);
  spec.n = args.length > 0 ? args.length : scenario_default_length(spec.scenario);
  spec.seed = args.seed;
  spec.burn_in = args.burn_in;

  const edclust::Experiment ex = edclust::build_experiment(spec);
  const ordered_json config = simulate_config(args, spec.n);
  const std::filesystem::path out_dir(args.out_dir);

  edclust::write_text_atomic(out_dir / "panel.csv",
                             edclust::panel_to_csv(ex.panel, csv_metadata(config)));

  ordered_json truth_doc;
  truth_doc["schema"] = "edclust-ground-truth/1";
  truth_doc["version"] = edclust::version_string;
  truth_doc["config"] = config;
  truth_doc["names"] = ex.panel.names;
  truth_doc["labels"] = ex.truth.partition.labels;
  truth_doc["k0"] = ex.truth.k0;
  edclust::write_text_atomic(out_dir / "ground_truth.json", truth_doc.dump(2) + "\n");

  std::cout << "wrote panel.csv and ground_truth.json to " << out_dir.string() << "\n";
}

void run_benchmark(const BenchmarkArgs& args) {
  if (args.methods.empty()) throw UsageError("--methods must list at least one method");
  std::vector<edclust::MethodSpec> methods;
  methods.reserve(args.methods.size());
  for (const std::string& token : args.methods) {
    try {
      methods.push_back(edclust::MethodSpec::parse(token));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  edclust::set_max_threads(args.threads);

  edclust::SimSpec spec;
  spec.scenario = edclust::parse_scenario(args.scenario);
  spec.n = args.length > 0 ? args.length : scenario_default_length(spec.scenario);
  spec.burn_in = args.burn_in;

  const edclust::KMode k_mode =
      args.k_mode == "auto" ? edclust::KMode::Silhouette : edclust::KMode::KnownK0;
  const edclust::ExperimentReport report =
      edclust::run_experiment(spec, methods, args.reps, args.seed, k_mode);

  const ordered_json config = benchmark_config(args, spec.n);
  ordered_json report_doc = ordered_json::parse(edclust::report_to_json(report));
  report_doc["config"]["methods"] = args.methods;  // echo the exact tokens
  const std::filesystem::path out_dir(args.out_dir);
  edclust::write_text_atomic(out_dir / "report.json", report_doc.dump(2) + "\n");

  std::string scores = "# edclust_version: " + std::string(edclust::version_string) + "\n";
  scores += "# config: " + config.dump() + "\n";
  scores += edclust::report_scores_csv(report);
  edclust::write_text_atomic(out_dir / "scores.csv", scores);

  std::cout << "wrote report.json and scores.csv to " << out_dir.string() << "\n";
  for (const edclust::MethodResult& result : report.methods) {
    std::cout << "  " << result.spec.label() << ": median=" << result.summary.median
              << " mean=" << result.summary.mean << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-series clustering with energy-distance dissimilarities"};
  app.set_version_flag("--version", edclust::version_string);
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand(
      "cluster", "Cluster the components of a CSV panel and emit dendrogram artifacts");
  cluster->add_option("--input,-i", cluster_args.input, "Input CSV (header row, one column per component)")
      ->required();
  cluster->add_option("--out-dir,-o", cluster_args.out_dir, "Output directory")->required();
  cluster->add_option("--transform", cluster_args.transform, "Column transform")
      ->check(CLI::IsMember({"none", "normalize", "log_growth", "log_growth_then_normalize"}));
  cluster->add_option("--mode", cluster_args.mode, "Energy matrix mode")
      ->check(CLI::IsMember({"joint", "bivariate-sum"}));
  cluster->add_option("--lag", cluster_args.lag, "Embedding lag h (energy modes)")
      ->check(CLI::NonNegativeNumber);
  cluster->add_option("--method", cluster_args.method, "Dissimilarity method")
      ->check(CLI::IsMember({"energy", "acf", "pacf", "per", "per-lp", "int-per"}));
  cluster->add_option("--acf-L", cluster_args.acf_max_lag, "Max lag L for acf/pacf")
      ->check(CLI::PositiveNumber);
  cluster->add_option("--acf-p", cluster_args.acf_weight, "Geometric weight p for acf/pacf");
  cluster->add_option("--clusters", cluster_args.clusters, "Number of clusters or 'auto'");
  cluster->add_option("--k-max", cluster_args.k_max,
                      "Largest K tried when --clusters auto (default min(d-1, 10))")
      ->check(CLI::NonNegativeNumber);
  cluster->add_option("--threads", cluster_args.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  SimulateArgs simulate_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a benchmark scenario panel with ground truth");
  simulate->add_option("--scenario", simulate_args.scenario, "nonlinear16 | arma20 | var40")
      ->required()
      ->check(CLI::IsMember({"nonlinear16", "arma20", "var40"}));
  simulate->add_option("--out-dir,-o", simulate_args.out_dir, "Output directory")->required();
  simulate->add_option("--length,-n", simulate_args.length,
                       "Series length (default: scenario's standard length)");
  simulate->add_option("--seed", simulate_args.seed, "RNG seed");
  simulate->add_option("--burn-in", simulate_args.burn_in, "Discarded warm-up steps")
      ->check(CLI::NonNegativeNumber);

  BenchmarkArgs benchmark_args;
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Run replicated method comparisons on a simulated scenario");
  benchmark->add_option("--scenario", benchmark_args.scenario, "nonlinear16 | arma20 | var40")
      ->required()
      ->check(CLI::IsMember({"nonlinear16", "arma20", "var40"}));
  benchmark->add_option("--out-dir,-o", benchmark_args.out_dir, "Output directory")->required();
  benchmark
      ->add_option("--methods", benchmark_args.methods,
                   "Comma-separated method tokens (energy-h1, energy-sum-h2, acf-L10, "
                   "pacf-L25, per, per-lp, int-per)")
      ->required()
      ->delimiter(',');
  benchmark->add_option("--length,-n", benchmark_args.length,
                        "Series length (default: scenario's standard length)");
  benchmark->add_option("--seed", benchmark_args.seed, "Base RNG seed");
  benchmark->add_option("--burn-in", benchmark_args.burn_in, "Discarded warm-up steps")
      ->check(CLI::NonNegativeNumber);
  benchmark->add_option("--reps", benchmark_args.reps, "Replicates")->check(CLI::PositiveNumber);
  benchmark->add_option("--k-mode", benchmark_args.k_mode, "known: cut at K0; auto: silhouette")
      ->check(CLI::IsMember({"known", "auto"}));
  benchmark->add_option("--threads", benchmark_args.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cluster)) {
      run_cluster(cluster_args);
    } else if (app.got_subcommand(simulate)) {
      run_simulate(simulate_args);
    } else if (app.got_subcommand(benchmark)) {
      run_benchmark(benchmark_args);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
