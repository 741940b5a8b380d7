#include "edclust/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "edclust/accum.hpp"
#include "edclust/parallel.hpp"

namespace edclust {

namespace {

constexpr Eigen::Index kRowBlock = 128;   // parallel/reduction granularity
constexpr Eigen::Index kChunk = 1024;     // plain-summation run length

void validate_sample(const Sample& s, const char* name) {
  if (s.n() < 1 || s.dim() < 1) {
    throw std::invalid_argument(std::string("energy: empty sample ") + name);
  }
  if (!s.values.allFinite()) {
    throw std::invalid_argument(std::string("energy: non-finite entry in sample ") + name);
  }
}

void validate_pair(const Sample& y, const Sample& z) {
  validate_sample(y, "y");
  validate_sample(z, "z");
  if (y.dim() != z.dim()) {
    throw std::invalid_argument("energy: dimension mismatch between samples");
  }
}

// Orders the two samples canonically (by size, dimension, then entries) so
// that vstat(y,z) and vstat(z,y) execute the identical instruction sequence
// and agree bit-for-bit.
bool first_is_canonical(const Sample& a, const Sample& b) {
  if (a.n() != b.n()) return a.n() < b.n();
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  const double* pa = a.values.data();
  const double* pb = b.values.data();
  const Eigen::Index total = a.n() * a.dim();
  for (Eigen::Index i = 0; i < total; ++i) {
    if (pa[i] != pb[i]) return pa[i] < pb[i];
  }
  return true;  // identical contents: either order works
}

template <int P>
inline double row_distance(const double* x, const double* y, Eigen::Index p) {
  if constexpr (P == 1) {
    return std::abs(x[0] - y[0]);
  } else if constexpr (P > 1) {
    double s = 0.0;
    for (int i = 0; i < P; ++i) {
      const double d = x[i] - y[i];
      s += d * d;
    }
    return std::sqrt(s);
  } else {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double d = x[i] - y[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
}

// Sum of kern(row_j(a), row_k(b)) over the full rectangle j in [0,na),
// k in [0,nb).  Traversal is row-major j then k in fixed-size blocks with a
// compensated reduction in block order, so the value is independent of the
// thread count and stable under row permutations to ~1 ulp per chunk.
template <class Kernel>
double rectangle_sum(const double* a, Eigen::Index na, const double* b, Eigen::Index nb,
                     Eigen::Index p, Kernel kern) {
  const Eigen::Index blocks = (na + kRowBlock - 1) / kRowBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks));
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t bi) {
    const Eigen::Index j0 = static_cast<Eigen::Index>(bi) * kRowBlock;
    const Eigen::Index j1 = std::min(na, j0 + kRowBlock);
    NeumaierSum acc;
    for (Eigen::Index j = j0; j < j1; ++j) {
      const double* aj = a + j * p;
      Eigen::Index k = 0;
      while (k < nb) {
        const Eigen::Index kend = std::min(nb, k + kChunk);
        double local = 0.0;
        for (; k < kend; ++k) local += kern(aj, b + k * p);
        acc.add(local);
      }
    }
    partial[bi] = acc.value();
  });
  NeumaierSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

// The combination below is symmetric in (y, z); pinning a canonical
// orientation makes the float operation sequence identical under swap.
struct CanonicalPair {
  const Sample* a;
  const Sample* b;
  double cross = 0.0;
  double within_a = 0.0;
  double within_b = 0.0;
  double na() const { return static_cast<double>(a->n()); }
  double nb() const { return static_cast<double>(b->n()); }
};

template <class Kernel>
CanonicalPair paired_sums(const Sample& y, const Sample& z, Kernel kern) {
  CanonicalPair cp;
  cp.a = first_is_canonical(y, z) ? &y : &z;
  cp.b = (cp.a == &y) ? &z : &y;
  const Eigen::Index p = cp.a->dim();
  const double* pa = cp.a->values.data();
  const double* pb = cp.b->values.data();
  cp.cross = rectangle_sum(pa, cp.a->n(), pb, cp.b->n(), p, kern);
  cp.within_a = rectangle_sum(pa, cp.a->n(), pa, cp.a->n(), p, kern);
  cp.within_b = rectangle_sum(pb, cp.b->n(), pb, cp.b->n(), p, kern);
  return cp;
}

template <class Kernel>
double distance_vstat(const Sample& y, const Sample& z, Kernel kern) {
  const CanonicalPair cp = paired_sums(y, z, kern);
  const double na = cp.na(), nb = cp.nb();
  // For y == z all three sums are equal and 2t - t - t vanishes exactly.
  const double value =
      2.0 * (cp.cross / (na * nb)) - cp.within_a / (na * na) - cp.within_b / (nb * nb);
  return std::max(value, 0.0);
}

}  // namespace

double energy_weight_constant(int p) {
  if (p < 1) throw std::invalid_argument("energy_weight_constant: p must be >= 1");
  const double half = 0.5 * (p + 1);
  return std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double energy_distance_vstat(const Sample& y, const Sample& z) {
  validate_pair(y, z);
  const Eigen::Index p = y.dim();
  switch (p) {
    case 1:
      return distance_vstat(y, z, [](const double* a, const double* b) {
        return row_distance<1>(a, b, 1);
      });
    case 2:
      return distance_vstat(y, z, [](const double* a, const double* b) {
        return row_distance<2>(a, b, 2);
      });
    case 3:
      return distance_vstat(y, z, [](const double* a, const double* b) {
        return row_distance<3>(a, b, 3);
      });
    default:
      return distance_vstat(y, z, [p](const double* a, const double* b) {
        return row_distance<0>(a, b, p);
      });
  }
}

double energy_distance_gaussian_kernel(const Sample& y, const Sample& z, double sigma) {
  validate_pair(y, z);
  if (!(sigma > 0.0)) throw std::invalid_argument("energy: sigma must be positive");
  if (y.dim() != 1) {
    throw std::invalid_argument("energy_distance_gaussian_kernel: univariate samples only");
  }
  const double half_s2 = 0.5 * sigma * sigma;
  const CanonicalPair cp = paired_sums(y, z, [half_s2](const double* a, const double* b) {
    const double d = a[0] - b[0];
    return std::exp(-half_s2 * d * d);
  });
  const double na = cp.na(), nb = cp.nb();
  const double value =
      cp.within_a / (na * na) + cp.within_b / (nb * nb) - 2.0 * (cp.cross / (na * nb));
  return std::clamp(value, 0.0, 2.0);
}

double closed_form_normal(double sigma, double theta) {
  if (!(sigma > 0.0)) throw std::invalid_argument("closed_form_normal: sigma must be positive");
  const double s = std::sqrt(sigma * sigma + 1.0);
  const double tau = std::abs(theta) / s;
  // E|N(mu, v)| = mu(2 Phi(mu/sd) - 1) + sd sqrt(2/pi) exp(-mu^2/(2v))
  const double phi_term = tau * std::erf(tau / std::numbers::sqrt2) +
                          std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * tau * tau);
  const double value = 2.0 * s * phi_term - 2.0 / std::sqrt(std::numbers::pi) * (sigma + 1.0);
  return std::max(value, 0.0);
}

double closed_form_laplace_vs_normal(double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("closed_form_laplace_vs_normal: lambda must be positive");
  }
  // 1 - Phi(x) = erfc(x / sqrt(2)) / 2
  const double upper_tail = 0.5 * std::erfc(1.0 / (lambda * std::numbers::sqrt2));
  const double value = 4.0 * lambda * upper_tail * std::exp(0.5 / (lambda * lambda)) -
                       1.5 * lambda +
                       2.0 * (std::numbers::sqrt2 - 1.0) / std::sqrt(std::numbers::pi);
  return std::max(value, 0.0);
}

EmpiricalCF empirical_cf(const Sample& s, std::span<const double> grid) {
  validate_sample(s, "s");
  if (s.dim() != 1) throw std::invalid_argument("empirical_cf: univariate samples only");
  EmpiricalCF out;
  out.grid.assign(grid.begin(), grid.end());
  out.re.assign(grid.size(), 0.0);
  out.im.assign(grid.size(), 0.0);
  const double* x = s.values.data();
  const Eigen::Index n = s.n();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    NeumaierSum re, im;
    for (Eigen::Index j = 0; j < n; ++j) {
      re.add(std::cos(grid[k] * x[j]));
      im.add(std::sin(grid[k] * x[j]));
    }
    out.re[k] = re.value() / static_cast<double>(n);
    out.im[k] = im.value() / static_cast<double>(n);
  }
  return out;
}

namespace {

// ECF of x on the uniform grid t0 + k*dt, k in [0, m), via the phase
// recurrence exp(i t_{k+1} x) = exp(i t_k x) * exp(i dt x): one sincos pair
// per sample point instead of one per (sample, node).
void ecf_uniform(const double* x, Eigen::Index n, double t0, double dt, std::size_t m,
                 std::vector<double>& re, std::vector<double>& im) {
  re.assign(m, 0.0);
  im.assign(m, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    double cr = std::cos(t0 * x[j]);
    double ci = std::sin(t0 * x[j]);
    const double sr = std::cos(dt * x[j]);
    const double si = std::sin(dt * x[j]);
    for (std::size_t k = 0; k < m; ++k) {
      re[k] += cr;
      im[k] += ci;
      const double next_r = cr * sr - ci * si;
      ci = cr * si + ci * sr;
      cr = next_r;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < m; ++k) {
    re[k] *= inv_n;
    im[k] *= inv_n;
  }
}

// Composite Simpson of |phi_y - phi_z|^2 / (pi t^2) on [a, b] with
// `intervals` (even) uniform panels.
double simpson_segment(const Sample& y, const Sample& z, double a, double b, int intervals) {
  const std::size_t m = static_cast<std::size_t>(intervals) + 1;
  const double dt = (b - a) / intervals;
  std::vector<double> yr, yi, zr, zi;
  ecf_uniform(y.values.data(), y.n(), a, dt, m, yr, yi);
  ecf_uniform(z.values.data(), z.n(), a, dt, m, zr, zi);
  NeumaierSum acc;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = a + static_cast<double>(k) * dt;
    const double dre = yr[k] - zr[k];
    const double dim = yi[k] - zi[k];
    const double f = (dre * dre + dim * dim) / (std::numbers::pi * t * t);
    const double w = (k == 0 || k + 1 == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc.add(w * f);
  }
  return acc.value() * dt / 3.0;
}

}  // namespace

double energy_distance_quadrature_1d(const Sample& y, const Sample& z,
                                     const QuadratureGrid& grid) {
  validate_pair(y, z);
  if (y.dim() != 1) {
    throw std::invalid_argument("energy_distance_quadrature_1d: univariate samples only");
  }
  if (!(grid.eps > 0.0) || !(grid.dense_limit > grid.eps) || !(grid.s_max > grid.dense_limit)) {
    throw std::invalid_argument("energy_distance_quadrature_1d: need 0 < eps < dense_limit < s_max");
  }
  if (grid.dense_intervals < 2 || grid.dense_intervals % 2 != 0 || grid.panel_intervals < 2 ||
      grid.panel_intervals % 2 != 0) {
    throw std::invalid_argument("energy_distance_quadrature_1d: interval counts must be even and >= 2");
  }

  double integral = simpson_segment(y, z, grid.eps, grid.dense_limit, grid.dense_intervals);
  double lo = grid.dense_limit;
  while (lo < grid.s_max) {
    const double hi = std::min(2.0 * lo, grid.s_max);
    integral += simpson_segment(y, z, lo, hi, grid.panel_intervals);
    lo = hi;
  }
  // The integrand is even in t; [eps, s_max] covers half the line.
  return 2.0 * integral;
}

}  // namespace edclust
