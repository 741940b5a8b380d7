#include "edclust/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "edclust/parallel.hpp"

namespace edclust {

void validate_panel(const TimeSeriesPanel& panel) {
  if (panel.values.rows() < 2 || panel.values.cols() < 2) {
    throw std::invalid_argument("panel: need at least 2 time points and 2 components");
  }
  if (!panel.values.allFinite()) {
    throw std::invalid_argument("panel: non-finite entry");
  }
  if (!panel.names.empty()) {
    if (static_cast<Eigen::Index>(panel.names.size()) != panel.values.cols()) {
      throw std::invalid_argument("panel: name count does not match component count");
    }
    std::set<std::string> unique(panel.names.begin(), panel.names.end());
    if (static_cast<Eigen::Index>(unique.size()) != panel.values.cols()) {
      throw std::invalid_argument("panel: duplicate component names");
    }
  }
}

void validate_dissimilarity_matrix(const DissimilarityMatrix& d) {
  const Eigen::Index n = d.values.rows();
  if (n < 2 || d.values.cols() != n) {
    throw std::invalid_argument("dissimilarity matrix: must be square with size >= 2");
  }
  if (!d.values.allFinite()) {
    throw std::invalid_argument("dissimilarity matrix: non-finite entry");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (d.values(j, j) != 0.0) {
      throw std::invalid_argument("dissimilarity matrix: nonzero diagonal");
    }
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double a = d.values(j, k);
      const double b = d.values(k, j);
      if (a < 0.0 || b < 0.0) {
        throw std::invalid_argument("dissimilarity matrix: negative entry");
      }
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        throw std::invalid_argument("dissimilarity matrix: not symmetric");
      }
    }
  }
}

Sample lag_embed(std::span<const double> series, int h) {
  const Eigen::Index n = static_cast<Eigen::Index>(series.size());
  if (h < 0) throw std::invalid_argument("lag_embed: h must be >= 0");
  if (static_cast<Eigen::Index>(h) >= n) throw std::invalid_argument("lag_embed: h must be < n");
  Sample out;
  out.values.resize(n - h, h + 1);
  for (Eigen::Index t = 0; t < n - h; ++t) {
    for (Eigen::Index c = 0; c <= h; ++c) out.values(t, c) = series[t + c];
  }
  return out;
}

Sample pair_embed_bivariate(std::span<const double> series, int ell) {
  const Eigen::Index n = static_cast<Eigen::Index>(series.size());
  if (ell < 1) throw std::invalid_argument("pair_embed_bivariate: ell must be >= 1");
  if (static_cast<Eigen::Index>(ell) >= n) {
    throw std::invalid_argument("pair_embed_bivariate: ell must be < n");
  }
  Sample out;
  out.values.resize(n - ell, 2);
  for (Eigen::Index t = 0; t < n - ell; ++t) {
    out.values(t, 0) = series[t];
    out.values(t, 1) = series[t + ell];
  }
  return out;
}

namespace {

std::span<const double> column_span(const TimeSeriesPanel& panel, Eigen::Index j) {
  return {panel.values.col(j).data(), static_cast<std::size_t>(panel.values.rows())};
}

// Fills the upper triangle in parallel over (j,k) pairs and mirrors.  Each
// pair task writes one disjoint cell, so scheduling cannot affect results.
DissimilarityMatrix pairwise_matrix(const std::vector<Sample>& embeddings) {
  const Eigen::Index d = static_cast<Eigen::Index>(embeddings.size());
  DissimilarityMatrix out;
  out.values = Eigen::MatrixXd::Zero(d, d);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
  }
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [j, k] = pairs[i];
    out.values(j, k) = energy_distance_vstat(embeddings[j], embeddings[k]);
  });
  for (const auto& [j, k] : pairs) out.values(k, j) = out.values(j, k);
  return out;
}

}  // namespace

DissimilarityMatrix joint_dissimilarity_matrix(const TimeSeriesPanel& panel, int h) {
  validate_panel(panel);
  if (h < 0 || static_cast<Eigen::Index>(h) >= panel.length()) {
    throw std::invalid_argument("joint_dissimilarity_matrix: need 0 <= h < n");
  }
  const Eigen::Index d = panel.components();
  std::vector<Sample> embeddings(static_cast<std::size_t>(d));
  parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
    embeddings[j] = lag_embed(column_span(panel, static_cast<Eigen::Index>(j)), h);
  });
  return pairwise_matrix(embeddings);
}

DissimilarityMatrix bivariate_sum_dissimilarity_matrix(const TimeSeriesPanel& panel, int h) {
  validate_panel(panel);
  if (h < 0 || static_cast<Eigen::Index>(h) >= panel.length()) {
    throw std::invalid_argument("bivariate_sum_dissimilarity_matrix: need 0 <= h < n");
  }
  const Eigen::Index d = panel.components();
  std::vector<Sample> marginals(static_cast<std::size_t>(d));
  parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
    marginals[j] = lag_embed(column_span(panel, static_cast<Eigen::Index>(j)), 0);
  });
  DissimilarityMatrix total = pairwise_matrix(marginals);
  for (int ell = 1; ell <= h; ++ell) {
    std::vector<Sample> pairs_ell(static_cast<std::size_t>(d));
    parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
      pairs_ell[j] = pair_embed_bivariate(column_span(panel, static_cast<Eigen::Index>(j)), ell);
    });
    total.values += pairwise_matrix(pairs_ell).values;
  }
  return total;
}

TimeSeriesPanel normalize(const TimeSeriesPanel& panel) {
  validate_panel(panel);
  TimeSeriesPanel out;
  out.names = panel.names;
  out.values.resize(panel.values.rows(), panel.values.cols());
  const Eigen::Index n = panel.values.rows();
  for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
    Eigen::VectorXd centered = panel.values.col(j).array() - panel.values.col(j).mean();
    centered.array() -= centered.mean();  // second pass pins the mean to ~1 ulp
    const double ss = centered.squaredNorm();
    if (!(ss > 0.0)) {
      throw std::invalid_argument("normalize: constant column " + std::to_string(j));
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    out.values.col(j) = centered / sd;
  }
  return out;
}

TimeSeriesPanel log_growth(const TimeSeriesPanel& panel) {
  validate_panel(panel);
  if ((panel.values.array() <= 0.0).any()) {
    throw std::invalid_argument("log_growth: nonpositive entry");
  }
  TimeSeriesPanel out;
  out.names = panel.names;
  const Eigen::Index n = panel.values.rows();
  out.values.resize(n - 1, panel.values.cols());
  for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
    for (Eigen::Index t = 1; t < n; ++t) {
      out.values(t - 1, j) = std::log(panel.values(t, j) / panel.values(t - 1, j));
    }
  }
  return out;
}

}  // namespace edclust
