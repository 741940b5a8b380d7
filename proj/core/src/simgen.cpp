#include "edclust/simgen.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edclust/parallel.hpp"
#include "edclust/rng.hpp"

namespace edclust {

std::vector<double> nonlinear_path(NonlinearModel model, std::span<const double> innovations) {
  std::vector<double> x(innovations.size(), 0.0);
  double x_prev = 0.0;
  double e_prev = 0.0;
  for (std::size_t t = 0; t < innovations.size(); ++t) {
    const double e = innovations[t];
    double value = 0.0;
    switch (model) {
      case NonlinearModel::Tar:
        value = (x_prev <= 0.0 ? 0.5 * x_prev : -2.0 * x_prev) + e;
        break;
      case NonlinearModel::Expar:
        value = (0.3 - 10.0 * std::exp(-x_prev * x_prev)) * x_prev + e;
        break;
      case NonlinearModel::Ma1:
        value = e - 0.4 * e_prev;
        break;
      case NonlinearModel::Nlma:
        value = e - 0.5 * e_prev + 0.8 * e_prev * e_prev;
        break;
    }
    x[t] = value;
    x_prev = value;
    e_prev = e;
  }
  return x;
}

bool is_causal(std::span<const double> ar) {
  if (ar.empty()) return true;
  const Eigen::Index p = static_cast<Eigen::Index>(ar.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd eigs = companion.eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) radius = std::max(radius, std::abs(eigs[i]));
  return radius < 1.0;
}

std::vector<double> arma_path(std::span<const double> ar, std::span<const double> ma,
                              std::span<const double> innovations) {
  if (!is_causal(ar)) {
    throw std::invalid_argument("arma_path: AR polynomial is not causal");
  }
  const std::size_t p = ar.size();
  const std::size_t q = ma.size();
  std::vector<double> x(innovations.size(), 0.0);
  for (std::size_t t = 0; t < innovations.size(); ++t) {
    double value = innovations[t];
    for (std::size_t i = 0; i < p; ++i) {
      if (t >= i + 1) value += ar[i] * x[t - i - 1];
    }
    for (std::size_t i = 0; i < q; ++i) {
      if (t >= i + 1) value += ma[i] * innovations[t - i - 1];
    }
    x[t] = value;
  }
  return x;
}

Eigen::MatrixXd var_path(const std::vector<Eigen::MatrixXd>& lags,
                         const Eigen::MatrixXd& innovations, const Eigen::MatrixXd& init) {
  if (lags.empty()) throw std::invalid_argument("var_path: no coefficient matrices");
  const Eigen::Index d = lags[0].rows();
  for (const Eigen::MatrixXd& b : lags) {
    if (b.rows() != d || b.cols() != d) {
      throw std::invalid_argument("var_path: coefficient matrices must be square, same size");
    }
  }
  if (innovations.cols() != d) {
    throw std::invalid_argument("var_path: innovation dimension mismatch");
  }
  const Eigen::Index order = static_cast<Eigen::Index>(lags.size());
  if (init.rows() != order || init.cols() != d) {
    throw std::invalid_argument("var_path: init must have one row per AR order");
  }
  const Eigen::Index m = innovations.rows();
  Eigen::MatrixXd x(m, d);
  for (Eigen::Index t = 0; t < m; ++t) {
    Eigen::RowVectorXd value = innovations.row(t);
    for (Eigen::Index i = 0; i < order; ++i) {
      // Row t holds X_{t+1}; the i-th lag needs X_{t-i}, which is output row
      // t-i-1 once generated and init row i-t (X_0, X_-1, ...) before that.
      const Eigen::RowVectorXd past =
          (t - i - 1 >= 0) ? Eigen::RowVectorXd(x.row(t - i - 1))
                           : Eigen::RowVectorXd(init.row(i - t));
      value += past * lags[static_cast<std::size_t>(i)].transpose();
    }
    x.row(t) = value;
  }
  return x;
}

namespace {

std::vector<double> draw_normals(PhiloxStream& stream, std::size_t count) {
  std::vector<double> out(count);
  for (double& v : out) v = stream.next_normal();
  return out;
}

}  // namespace

std::vector<double> gen_nonlinear(NonlinearModel model, int n, std::uint64_t seed,
                                  std::uint64_t stream_id, int burn_in) {
  if (n < 1) throw std::invalid_argument("gen_nonlinear: n must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("gen_nonlinear: burn_in must be >= 0");
  PhiloxStream stream(seed, stream_id);
  const std::vector<double> eps = draw_normals(stream, static_cast<std::size_t>(burn_in + n));
  std::vector<double> path = nonlinear_path(model, eps);
  return {path.end() - n, path.end()};
}

std::vector<double> gen_arma(std::span<const double> ar, std::span<const double> ma, int n,
                             std::uint64_t seed, std::uint64_t stream_id, int burn_in) {
  if (n < 1) throw std::invalid_argument("gen_arma: n must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("gen_arma: burn_in must be >= 0");
  if (!is_causal(ar)) {
    throw std::invalid_argument("gen_arma: AR polynomial is not causal");
  }
  PhiloxStream stream(seed, stream_id);
  const std::vector<double> eps = draw_normals(stream, static_cast<std::size_t>(burn_in + n));
  std::vector<double> path = arma_path(ar, ma, eps);
  return {path.end() - n, path.end()};
}

namespace {

Eigen::MatrixXd grid_matrix_column_major(double lo, double hi) {
  // 100 equally spaced values (both endpoints included) filling a 10x10
  // matrix column by column.
  Eigen::MatrixXd m(10, 10);
  for (int idx = 0; idx < 100; ++idx) {
    const double value = lo + (hi - lo) * static_cast<double>(idx) / 99.0;
    m(idx % 10, idx / 10) = value;
  }
  return m;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& lags) {
  const Eigen::Index d = lags[0].rows();
  const Eigen::Index order = static_cast<Eigen::Index>(lags.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d * order, d * order);
  for (Eigen::Index i = 0; i < order; ++i) {
    companion.block(0, i * d, d, d) = lags[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 1; i < order; ++i) {
    companion.block(i * d, (i - 1) * d, d, d) = Eigen::MatrixXd::Identity(d, d);
  }
  const Eigen::VectorXcd eigs = companion.eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) radius = std::max(radius, std::abs(eigs[i]));
  return radius;
}

}  // namespace

std::vector<Eigen::MatrixXd> var_coefficients(VarKind kind) {
  if (kind == VarKind::Var1) {
    Eigen::MatrixXd b = grid_matrix_column_major(-1.0, 1.0);
    b /= 1.05 * spectral_norm(b);
    return {b};
  }
  Eigen::MatrixXd b1 = grid_matrix_column_major(-1.0, 0.0);
  Eigen::MatrixXd b2 = grid_matrix_column_major(0.0, 1.0);
  const Eigen::MatrixXd sum = b1 + b2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sum * sum.transpose());
  const double lambda_max = solver.eigenvalues().maxCoeff();
  // Dividing by 1.05 * lambda_max (rather than its square root) is what
  // actually yields a stationary system here: the grid matrices are so
  // strongly correlated that the sqrt scaling leaves the companion spectral
  // radius above 1.  See the stationarity guard in gen_var.
  const double scale = 1.05 * lambda_max;
  b1 /= scale;
  b2 /= scale;
  return {b1, b2};
}

Eigen::MatrixXd gen_var(const std::vector<Eigen::MatrixXd>& lags, NoiseKind noise, int n,
                        std::uint64_t seed, std::uint64_t stream_base, int burn_in) {
  if (n < 1) throw std::invalid_argument("gen_var: n must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("gen_var: burn_in must be >= 0");
  if (lags.empty()) throw std::invalid_argument("gen_var: no coefficient matrices");
  if (companion_spectral_radius(lags) >= 1.0) {
    throw std::invalid_argument("gen_var: VAR system is not stationary");
  }
  const Eigen::Index d = lags[0].rows();
  const Eigen::Index m = burn_in + n;
  Eigen::MatrixXd innovations(m, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    PhiloxStream stream(seed, stream_base + static_cast<std::uint64_t>(c));
    for (Eigen::Index t = 0; t < m; ++t) {
      innovations(t, c) =
          noise == NoiseKind::Normal ? stream.next_normal() : stream.next_student_t2();
    }
  }
  const Eigen::MatrixXd init =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lags.size()), d);
  const Eigen::MatrixXd path = var_path(lags, innovations, init);
  return path.bottomRows(n);
}

namespace {

struct ArmaModel {
  const char* tag;
  std::vector<double> ar;
  std::vector<double> ma;
};

const std::vector<ArmaModel>& arma_models() {
  static const std::vector<ArmaModel> models = {
      {"ar1", {0.5}, {}},
      {"ma1", {}, {0.7}},
      {"ar2", {0.6, 0.2}, {}},
      {"ma2", {}, {0.8, -0.6}},
      {"arma11", {0.8}, {0.2}},
  };
  return models;
}

Experiment build_nonlinear16(const SimSpec& spec) {
  const NonlinearModel models[4] = {NonlinearModel::Tar, NonlinearModel::Expar,
                                    NonlinearModel::Ma1, NonlinearModel::Nlma};
  const char* tags[4] = {"tar", "expar", "ma1", "nlma"};
  Experiment ex;
  ex.panel.values.resize(spec.n, 16);
  ex.truth.k0 = 4;
  ex.truth.partition.labels.resize(16);
  for (int j = 0; j < 16; ++j) {
    ex.panel.names.push_back(std::string(tags[j / 4]) + "_" + std::to_string(j % 4 + 1));
    ex.truth.partition.labels[static_cast<std::size_t>(j)] = j / 4 + 1;
  }
  parallel_for(16, [&](std::size_t j) {
    const std::vector<double> series =
        gen_nonlinear(models[j / 4], spec.n, spec.seed, static_cast<std::uint64_t>(j),
                      spec.burn_in);
    for (int t = 0; t < spec.n; ++t) {
      ex.panel.values(t, static_cast<Eigen::Index>(j)) = series[static_cast<std::size_t>(t)];
    }
  });
  return ex;
}

Experiment build_arma20(const SimSpec& spec) {
  const std::vector<ArmaModel>& models = arma_models();
  Experiment ex;
  ex.panel.values.resize(spec.n, 20);
  ex.truth.k0 = 5;
  ex.truth.partition.labels.resize(20);
  for (int j = 0; j < 20; ++j) {
    ex.panel.names.push_back(std::string(models[static_cast<std::size_t>(j / 4)].tag) + "_" +
                             std::to_string(j % 4 + 1));
    ex.truth.partition.labels[static_cast<std::size_t>(j)] = j / 4 + 1;
  }
  parallel_for(20, [&](std::size_t j) {
    const ArmaModel& model = models[j / 4];
    const std::vector<double> series = gen_arma(model.ar, model.ma, spec.n, spec.seed,
                                                static_cast<std::uint64_t>(j), spec.burn_in);
    for (int t = 0; t < spec.n; ++t) {
      ex.panel.values(t, static_cast<Eigen::Index>(j)) = series[static_cast<std::size_t>(t)];
    }
  });
  return ex;
}

Experiment build_var40(const SimSpec& spec) {
  struct Block {
    const char* tag;
    VarKind kind;
    NoiseKind noise;
  };
  const Block blocks[4] = {{"var1n", VarKind::Var1, NoiseKind::Normal},
                           {"var1t", VarKind::Var1, NoiseKind::StudentT2},
                           {"var2n", VarKind::Var2, NoiseKind::Normal},
                           {"var2t", VarKind::Var2, NoiseKind::StudentT2}};
  Experiment ex;
  ex.panel.values.resize(spec.n, 40);
  ex.truth.k0 = 4;
  ex.truth.partition.labels.resize(40);
  for (int b = 0; b < 4; ++b) {
    const std::vector<Eigen::MatrixXd> lags = var_coefficients(blocks[b].kind);
    const Eigen::MatrixXd block = gen_var(lags, blocks[b].noise, spec.n, spec.seed,
                                          static_cast<std::uint64_t>(10 * b), spec.burn_in);
    ex.panel.values.middleCols(10 * b, 10) = block;
    for (int c = 0; c < 10; ++c) {
      ex.panel.names.push_back(std::string(blocks[b].tag) + "_" + std::to_string(c + 1));
      ex.truth.partition.labels[static_cast<std::size_t>(10 * b + c)] = b + 1;
    }
  }
  return ex;
}

}  // namespace

Experiment build_experiment(const SimSpec& spec) {
  if (spec.n < 10) throw std::invalid_argument("build_experiment: n must be >= 10");
  if (spec.burn_in < 0) throw std::invalid_argument("build_experiment: burn_in must be >= 0");
  Experiment ex;
  switch (spec.scenario) {
    case Scenario::Nonlinear16:
      ex = build_nonlinear16(spec);
      break;
    case Scenario::Arma20:
      ex = build_arma20(spec);
      break;
    case Scenario::Var40:
      ex = build_var40(spec);
      break;
  }
  ex.panel = normalize(ex.panel);
  return ex;
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Nonlinear16:
      return "nonlinear16";
    case Scenario::Arma20:
      return "arma20";
    case Scenario::Var40:
      return "var40";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "nonlinear16") return Scenario::Nonlinear16;
  if (name == "arma20") return Scenario::Arma20;
  if (name == "var40") return Scenario::Var40;
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected nonlinear16, arma20, or var40)");
}

}  // namespace edclust
