#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "edclust/energy.hpp"

namespace edclust {

// A d-component multivariate time series: rows = time points, one column per
// component series.  Component names are unique; entries are finite.
struct TimeSeriesPanel {
  Eigen::MatrixXd values;
  std::vector<std::string> names;

  Eigen::Index length() const { return values.rows(); }
  Eigen::Index components() const { return values.cols(); }
};

// Symmetric, zero-diagonal, nonnegative d x d matrix of pairwise
// dissimilarities between the panel's components.
struct DissimilarityMatrix {
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
};

void validate_panel(const TimeSeriesPanel& panel);
void validate_dissimilarity_matrix(const DissimilarityMatrix& d);

// Sliding window of width h+1: row t of the result is
// (x_t, x_{t+1}, ..., x_{t+h}), t = 0..n-h-1.  The empirical distribution of
// these rows stands in for the component's lag-h joint law.
Sample lag_embed(std::span<const double> series, int h);

// Pairs (x_t, x_{t+ell}) as rows of an (n-ell) x 2 sample.
Sample pair_embed_bivariate(std::span<const double> series, int ell);

// D_{jk} = energy distance between the lag-h joint embeddings of components
// j and k.
DissimilarityMatrix joint_dissimilarity_matrix(const TimeSeriesPanel& panel, int h);

// Element-wise sum of the marginal (lag-0) matrix and the bivariate-pair
// matrices for lags 1..h.
DissimilarityMatrix bivariate_sum_dissimilarity_matrix(const TimeSeriesPanel& panel, int h);

// Rescales every column to sample mean 0 and sample standard deviation 1
// (denominator n-1).  Errors on constant columns.
TimeSeriesPanel normalize(const TimeSeriesPanel& panel);

// log(x_t / x_{t-1}) per column; output has length n-1.  Errors on
// nonpositive entries.
TimeSeriesPanel log_growth(const TimeSeriesPanel& panel);

}  // namespace edclust
