#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edclust/baselines.hpp"
#include "edclust/simgen.hpp"

namespace edclust {

// Cluster-recovery score in (0, 1]:
//   Sim(G, A) = (1/K) sum_i max_j 2 |G_i n A_j| / (|G_i| + |A_j|)
// i.e. the best Dice coefficient per ground-truth cluster, averaged.  Equals
// 1 exactly when A is G up to label renaming.  Asymmetric in general; the
// first argument is the ground truth.
double similarity_index(const Partition& ground, const Partition& candidate);

// A clustering method competing in the experiments: the energy distance in
// either matrix mode at a fixed lag, or one of the baseline dissimilarities.
struct MethodSpec {
  enum class Kind { EnergyJoint, EnergySum, Acf, Pacf, Per, PerLog, PerInt };

  Kind kind = Kind::EnergyJoint;
  int lag = 1;             // energy modes
  int max_lag = 10;        // acf/pacf L
  double weight_p = 0.05;  // acf/pacf geometric weight

  // Token forms: energy-h<lag>, energy-sum-h<lag>, acf-L<L>, pacf-L<L>,
  // per, per-lp, int-per.
  std::string label() const;
  static MethodSpec parse(const std::string& token);

  DissimilarityMatrix dissimilarity(const TimeSeriesPanel& panel) const;
};

enum class KMode { KnownK0, Silhouette };

struct MethodSummary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
};
MethodSummary summarize(std::span<const double> values);

struct MethodResult {
  MethodSpec spec;
  std::vector<double> scores;  // one per replicate
  MethodSummary summary;
};

struct ExperimentReport {
  SimSpec spec;  // seed field holds the base seed
  KMode k_mode = KMode::KnownK0;
  int reps = 0;
  std::vector<MethodResult> methods;
};

// Runs `reps` replicates.  Replicate r simulates with seed = base_seed XOR r
// (spec.seed is superseded), scores every method on the same panel against
// the ground truth, cutting at K0 (KnownK0) or at the silhouette-selected K
// (Silhouette, k_max = min(d-1, 10)).  Deterministic in (spec, methods,
// reps, base_seed), independent of thread count.
ExperimentReport run_experiment(const SimSpec& spec, std::span<const MethodSpec> methods,
                                int reps, std::uint64_t base_seed, KMode k_mode);

// JSON document with schema version, run configuration, per-method scores
// and summaries.  Byte-stable for identical inputs.
std::string report_to_json(const ExperimentReport& report);

// Flat CSV: method,replicate,similarity.
std::string report_scores_csv(const ExperimentReport& report);

}  // namespace edclust
