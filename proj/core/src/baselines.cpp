#include "edclust/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "edclust/accum.hpp"
#include "edclust/parallel.hpp"

namespace edclust {

namespace {

void validate_series(std::span<const double> series, int max_lag) {
  if (max_lag < 1) throw std::invalid_argument("acf: max_lag must be >= 1");
  if (static_cast<std::size_t>(max_lag) >= series.size()) {
    throw std::invalid_argument("acf: max_lag must be < series length");
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw std::invalid_argument("acf: non-finite entry");
  }
}

}  // namespace

std::vector<double> acf(std::span<const double> series, int max_lag) {
  validate_series(series, max_lag);
  const std::size_t n = series.size();
  NeumaierSum mean_acc;
  for (double v : series) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(n);

  std::vector<double> cov(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int lag = 0; lag <= max_lag; ++lag) {
    NeumaierSum acc;
    for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < n; ++t) {
      acc.add((series[t] - mean) * (series[t + static_cast<std::size_t>(lag)] - mean));
    }
    cov[static_cast<std::size_t>(lag)] = acc.value() / static_cast<double>(n);
  }
  if (!(cov[0] > 0.0)) throw std::invalid_argument("acf: constant series");

  std::vector<double> rho(static_cast<std::size_t>(max_lag));
  for (int lag = 1; lag <= max_lag; ++lag) {
    rho[static_cast<std::size_t>(lag - 1)] = cov[static_cast<std::size_t>(lag)] / cov[0];
  }
  return rho;
}

std::vector<double> pacf(std::span<const double> series, int max_lag) {
  const std::vector<double> rho = acf(series, max_lag);

  // Durbin-Levinson: phi[k][k] is the lag-k partial autocorrelation.
  std::vector<double> out(static_cast<std::size_t>(max_lag));
  std::vector<double> phi_prev(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<double> phi_cur(static_cast<std::size_t>(max_lag) + 1, 0.0);
  double variance = 1.0;  // prediction error of the order-0 model / c_0

  for (int k = 1; k <= max_lag; ++k) {
    double numer = rho[static_cast<std::size_t>(k - 1)];
    for (int j = 1; j < k; ++j) {
      numer -= phi_prev[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(k - 1 - j)];
    }
    if (!(variance > 1e-14)) {
      throw std::invalid_argument("pacf: Durbin-Levinson recursion is numerically singular");
    }
    const double phi_kk = numer / variance;
    phi_cur[static_cast<std::size_t>(k)] = phi_kk;
    for (int j = 1; j < k; ++j) {
      phi_cur[static_cast<std::size_t>(j)] =
          phi_prev[static_cast<std::size_t>(j)] -
          phi_kk * phi_prev[static_cast<std::size_t>(k - j)];
    }
    variance *= (1.0 - phi_kk * phi_kk);
    out[static_cast<std::size_t>(k - 1)] = phi_kk;
    std::swap(phi_prev, phi_cur);
  }
  return out;
}

double weighted_acf_distance(std::span<const double> x, std::span<const double> y, int max_lag,
                             double weight_p, bool partial) {
  if (!(weight_p > 0.0 && weight_p < 1.0)) {
    throw std::invalid_argument("weighted_acf_distance: weight must lie in (0,1)");
  }
  const std::vector<double> rx = partial ? pacf(x, max_lag) : acf(x, max_lag);
  const std::vector<double> ry = partial ? pacf(y, max_lag) : acf(y, max_lag);
  NeumaierSum acc;
  double geo = 1.0 - weight_p;  // (1-p)^l starting at l = 1
  for (int lag = 1; lag <= max_lag; ++lag) {
    const double diff = rx[static_cast<std::size_t>(lag - 1)] - ry[static_cast<std::size_t>(lag - 1)];
    acc.add(weight_p * geo * diff * diff);
    geo *= 1.0 - weight_p;
  }
  return std::sqrt(std::max(acc.value(), 0.0));
}

std::vector<double> periodogram(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) throw std::invalid_argument("periodogram: need n >= 4");
  for (double v : series) {
    if (!std::isfinite(v)) throw std::invalid_argument("periodogram: non-finite entry");
  }
  const std::size_t m = n / 2;
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 1; j <= m; ++j) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    // exp(-i t w) by rotation recurrence, one sincos per frequency.
    const double cw = std::cos(w);
    const double sw = std::sin(w);
    double cr = cw;   // t = 1
    double ci = -sw;
    NeumaierSum re, im;
    for (std::size_t t = 0; t < n; ++t) {
      re.add(series[t] * cr);
      im.add(series[t] * ci);
      const double next = cr * cw + ci * sw;
      ci = ci * cw - cr * sw;
      cr = next;
    }
    out[j - 1] = (re.value() * re.value() + im.value() * im.value()) / static_cast<double>(n);
  }
  return out;
}

double periodogram_distance(std::span<const double> x, std::span<const double> y,
                            PeriodogramVariant variant) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("periodogram_distance: series lengths differ");
  }
  std::vector<double> ix = periodogram(x);
  std::vector<double> iy = periodogram(y);

  switch (variant) {
    case PeriodogramVariant::Raw:
      break;
    case PeriodogramVariant::Log:
      for (std::size_t j = 0; j < ix.size(); ++j) {
        if (!(ix[j] > 0.0) || !(iy[j] > 0.0)) {
          throw std::invalid_argument("periodogram_distance: log variant with zero ordinate");
        }
        ix[j] = std::log(ix[j]);
        iy[j] = std::log(iy[j]);
      }
      break;
    case PeriodogramVariant::Integrated: {
      double tx = 0.0, ty = 0.0;
      for (std::size_t j = 0; j < ix.size(); ++j) {
        tx += ix[j];
        ty += iy[j];
      }
      if (!(tx > 0.0) || !(ty > 0.0)) {
        throw std::invalid_argument("periodogram_distance: zero spectrum in integrated variant");
      }
      double cx = 0.0, cy = 0.0;
      for (std::size_t j = 0; j < ix.size(); ++j) {
        cx += ix[j];
        cy += iy[j];
        ix[j] = cx / tx;
        iy[j] = cy / ty;
      }
      break;
    }
  }

  NeumaierSum acc;
  for (std::size_t j = 0; j < ix.size(); ++j) {
    const double diff = ix[j] - iy[j];
    acc.add(diff * diff);
  }
  return std::sqrt(std::max(acc.value(), 0.0));
}

DissimilarityMatrix baseline_dissimilarity_matrix(const TimeSeriesPanel& panel,
                                                  const BaselineSpec& spec) {
  validate_panel(panel);
  const Eigen::Index d = panel.components();
  const Eigen::Index n = panel.length();

  auto column = [&](Eigen::Index j) {
    return std::span<const double>(panel.values.col(j).data(), static_cast<std::size_t>(n));
  };
  auto pair_distance = [&](Eigen::Index j, Eigen::Index k) {
    switch (spec.method) {
      case BaselineMethod::Acf:
        return weighted_acf_distance(column(j), column(k), spec.max_lag, spec.weight_p, false);
      case BaselineMethod::Pacf:
        return weighted_acf_distance(column(j), column(k), spec.max_lag, spec.weight_p, true);
      case BaselineMethod::Periodogram:
        return periodogram_distance(column(j), column(k), PeriodogramVariant::Raw);
      case BaselineMethod::LogPeriodogram:
        return periodogram_distance(column(j), column(k), PeriodogramVariant::Log);
      case BaselineMethod::IntegratedPeriodogram:
        return periodogram_distance(column(j), column(k), PeriodogramVariant::Integrated);
    }
    throw std::logic_error("baseline_dissimilarity_matrix: unknown method");
  };

  DissimilarityMatrix out;
  out.values = Eigen::MatrixXd::Zero(d, d);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
  }
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [j, k] = pairs[i];
    out.values(j, k) = pair_distance(j, k);
  });
  for (const auto& [j, k] : pairs) out.values(k, j) = out.values(j, k);
  return out;
}

}  // namespace edclust
