#include "edclust/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "edclust/io.hpp"
#include "edclust/parallel.hpp"
#include "edclust/version.hpp"

namespace edclust {

double similarity_index(const Partition& ground, const Partition& candidate) {
  if (ground.size() != candidate.size()) {
    throw std::invalid_argument("similarity_index: partitions cover different element counts");
  }
  const int kg = ground.k();
  const int ka = candidate.k();
  const int n = ground.size();

  // Contingency counts |G_i n A_j| plus marginals.
  std::vector<std::vector<int>> overlap(static_cast<std::size_t>(kg),
                                        std::vector<int>(static_cast<std::size_t>(ka), 0));
  std::vector<int> size_g(static_cast<std::size_t>(kg), 0);
  std::vector<int> size_a(static_cast<std::size_t>(ka), 0);
  for (int e = 0; e < n; ++e) {
    const int gi = ground.labels[static_cast<std::size_t>(e)] - 1;
    const int aj = candidate.labels[static_cast<std::size_t>(e)] - 1;
    ++overlap[static_cast<std::size_t>(gi)][static_cast<std::size_t>(aj)];
    ++size_g[static_cast<std::size_t>(gi)];
    ++size_a[static_cast<std::size_t>(aj)];
  }

  double total = 0.0;
  for (int i = 0; i < kg; ++i) {
    double best = 0.0;
    for (int j = 0; j < ka; ++j) {
      const double dice =
          2.0 * overlap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /
          (size_g[static_cast<std::size_t>(i)] + size_a[static_cast<std::size_t>(j)]);
      best = std::max(best, dice);
    }
    total += best;
  }
  return total / kg;
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::EnergyJoint:
      return "energy-h" + std::to_string(lag);
    case Kind::EnergySum:
      return "energy-sum-h" + std::to_string(lag);
    case Kind::Acf:
      return "acf-L" + std::to_string(max_lag);
    case Kind::Pacf:
      return "pacf-L" + std::to_string(max_lag);
    case Kind::Per:
      return "per";
    case Kind::PerLog:
      return "per-lp";
    case Kind::PerInt:
      return "int-per";
  }
  return "unknown";
}

MethodSpec MethodSpec::parse(const std::string& token) {
  auto parse_int_suffix = [&token](std::size_t pos) {
    const std::string digits = token.substr(pos);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("method token '" + token + "': expected an integer suffix");
    }
    return std::stoi(digits);
  };

  MethodSpec spec;
  if (token == "per") {
    spec.kind = Kind::Per;
  } else if (token == "per-lp") {
    spec.kind = Kind::PerLog;
  } else if (token == "int-per") {
    spec.kind = Kind::PerInt;
  } else if (token.rfind("energy-sum-h", 0) == 0) {
    spec.kind = Kind::EnergySum;
    spec.lag = parse_int_suffix(12);
  } else if (token.rfind("energy-h", 0) == 0) {
    spec.kind = Kind::EnergyJoint;
    spec.lag = parse_int_suffix(8);
  } else if (token.rfind("acf-L", 0) == 0) {
    spec.kind = Kind::Acf;
    spec.max_lag = parse_int_suffix(5);
  } else if (token.rfind("pacf-L", 0) == 0) {
    spec.kind = Kind::Pacf;
    spec.max_lag = parse_int_suffix(6);
  } else {
    throw std::invalid_argument(
        "unknown method token '" + token +
        "' (expected energy-h<lag>, energy-sum-h<lag>, acf-L<L>, pacf-L<L>, per, per-lp, "
        "int-per)");
  }
  if (spec.lag < 0) throw std::invalid_argument("method token '" + token + "': lag must be >= 0");
  if (spec.max_lag < 1) {
    throw std::invalid_argument("method token '" + token + "': L must be >= 1");
  }
  return spec;
}

DissimilarityMatrix MethodSpec::dissimilarity(const TimeSeriesPanel& panel) const {
  switch (kind) {
    case Kind::EnergyJoint:
      return joint_dissimilarity_matrix(panel, lag);
    case Kind::EnergySum:
      return bivariate_sum_dissimilarity_matrix(panel, lag);
    case Kind::Acf:
      return baseline_dissimilarity_matrix(panel, {BaselineMethod::Acf, max_lag, weight_p});
    case Kind::Pacf:
      return baseline_dissimilarity_matrix(panel, {BaselineMethod::Pacf, max_lag, weight_p});
    case Kind::Per:
      return baseline_dissimilarity_matrix(panel, {BaselineMethod::Periodogram, max_lag, weight_p});
    case Kind::PerLog:
      return baseline_dissimilarity_matrix(panel,
                                           {BaselineMethod::LogPeriodogram, max_lag, weight_p});
    case Kind::PerInt:
      return baseline_dissimilarity_matrix(
          panel, {BaselineMethod::IntegratedPeriodogram, max_lag, weight_p});
  }
  throw std::logic_error("MethodSpec::dissimilarity: unknown kind");
}

namespace {

// Quantile with linear interpolation between order statistics (the common
// "type 7" convention): position (n-1) q.
double quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double pos = static_cast<double>(n - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

MethodSummary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  MethodSummary s;
  double total = 0.0;
  for (double v : sorted) total += v;
  s.mean = total / static_cast<double>(sorted.size());
  s.median = quantile(sorted, 0.5);
  s.q1 = quantile(sorted, 0.25);
  s.q3 = quantile(sorted, 0.75);
  s.min_value = sorted.front();
  s.max_value = sorted.back();
  return s;
}

ExperimentReport run_experiment(const SimSpec& spec, std::span<const MethodSpec> methods,
                                int reps, std::uint64_t base_seed, KMode k_mode) {
  if (reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  if (methods.empty()) throw std::invalid_argument("run_experiment: no methods given");

  ExperimentReport report;
  report.spec = spec;
  report.spec.seed = base_seed;
  report.k_mode = k_mode;
  report.reps = reps;
  report.methods.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    report.methods[m].spec = methods[m];
    report.methods[m].scores.assign(static_cast<std::size_t>(reps), 0.0);
  }

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    SimSpec rep_spec = spec;
    rep_spec.seed = base_seed ^ static_cast<std::uint64_t>(r);
    const Experiment ex = build_experiment(rep_spec);
    const int d = static_cast<int>(ex.panel.components());
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const DissimilarityMatrix dis = methods[m].dissimilarity(ex.panel);
      const Dendrogram dend = agglomerate(dis);
      Partition part;
      if (k_mode == KMode::KnownK0) {
        part = cut(dend, ex.truth.k0);
      } else {
        part = cut(dend, select_k(dend, dis, default_k_max(d)).best_k);
      }
      report.methods[m].scores[r] = similarity_index(ex.truth.partition, part);
    }
  });

  for (MethodResult& result : report.methods) {
    result.summary = summarize(result.scores);
  }
  return report;
}

namespace {

nlohmann::ordered_json summary_json(const MethodSummary& s) {
  return {{"mean", s.mean},     {"median", s.median},       {"q1", s.q1},
          {"q3", s.q3},         {"min", s.min_value},       {"max", s.max_value}};
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["schema"] = "edclust-benchmark-report/1";
  doc["version"] = version_string;
  doc["config"] = {
      {"scenario", scenario_name(report.spec.scenario)},
      {"n", report.spec.n},
      {"burn_in", report.spec.burn_in},
      {"reps", report.reps},
      {"base_seed", report.spec.seed},
      {"k_mode", report.k_mode == KMode::KnownK0 ? "known" : "auto"},
  };
  doc["methods"] = nlohmann::ordered_json::array();
  for (const MethodResult& result : report.methods) {
    nlohmann::ordered_json entry;
    entry["method"] = result.spec.label();
    entry["summary"] = summary_json(result.summary);
    entry["scores"] = result.scores;
    doc["methods"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string report_scores_csv(const ExperimentReport& report) {
  std::string out = "method,replicate,similarity\n";
  for (const MethodResult& result : report.methods) {
    const std::string label = result.spec.label();
    for (std::size_t r = 0; r < result.scores.size(); ++r) {
      out += label + "," + std::to_string(r) + "," + format_g17(result.scores[r]) + "\n";
    }
  }
  return out;
}

}  // namespace edclust
