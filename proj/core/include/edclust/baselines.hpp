#pragma once

#include <span>
#include <vector>

#include "edclust/embedding.hpp"

namespace edclust {

enum class BaselineMethod { Acf, Pacf, Periodogram, LogPeriodogram, IntegratedPeriodogram };
enum class PeriodogramVariant { Raw, Log, Integrated };

struct BaselineSpec {
  BaselineMethod method = BaselineMethod::Acf;
  int max_lag = 10;        // L, used by Acf/Pacf
  double weight_p = 0.05;  // geometric weight, in (0,1)
};

// Autocorrelations rho_1..rho_L with the biased covariance estimator
// c_l = (1/n) sum_{t=1}^{n-l} (x_t - xbar)(x_{t+l} - xbar); rho_l = c_l/c_0.
// The 1/n denominator keeps (c_0..c_L) nonnegative definite, which the
// Durbin-Levinson recursion below relies on.
std::vector<double> acf(std::span<const double> series, int max_lag);

// Partial autocorrelations via Durbin-Levinson on the acf output;
// pacf[0] == acf[0].
std::vector<double> pacf(std::span<const double> series, int max_lag);

// Geometrically downweighted l2 distance between correlation profiles:
//   sqrt( sum_{l=1}^{L} p (1-p)^l (rho_{l,x} - rho_{l,y})^2 );
// `partial` switches from ACF to PACF profiles.
double weighted_acf_distance(std::span<const double> x, std::span<const double> y, int max_lag,
                             double weight_p, bool partial = false);

// Periodogram at the positive Fourier frequencies w_j = 2 pi j / n,
// j = 1..floor(n/2): I(w_j) = (1/n) |sum_t x_t exp(-i t w_j)|^2.
// Frequency 0 is excluded, which removes the sample mean.
std::vector<double> periodogram(std::span<const double> series);

// l2 distance between periodograms (Raw), their natural logs (Log), or
// their total-normalized cumulative sums (Integrated).
double periodogram_distance(std::span<const double> x, std::span<const double> y,
                            PeriodogramVariant variant);

DissimilarityMatrix baseline_dissimilarity_matrix(const TimeSeriesPanel& panel,
                                                  const BaselineSpec& spec);

}  // namespace edclust
