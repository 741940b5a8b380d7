#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "edclust/baselines.hpp"
#include "edclust/parallel.hpp"
#include "edclust/rng.hpp"
#include "edclust/simgen.hpp"

using edclust::NoiseKind;
using edclust::NonlinearModel;
using edclust::PhiloxStream;
using edclust::Scenario;
using edclust::SimSpec;
using edclust::VarKind;

namespace {

double spectral_norm_power_iteration(const Eigen::MatrixXd& b) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(b.cols()).normalized();
  Eigen::MatrixXd g = b.transpose() * b;
  for (int i = 0; i < 500; ++i) v = (g * v).normalized();
  return std::sqrt(v.dot(g * v));
}

Eigen::MatrixXd companion(const std::vector<Eigen::MatrixXd>& lags) {
  const Eigen::Index d = lags[0].rows();
  const Eigen::Index p = static_cast<Eigen::Index>(lags.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d * p, d * p);
  for (Eigen::Index i = 0; i < p; ++i) c.block(0, i * d, d, d) = lags[static_cast<std::size_t>(i)];
  if (p > 1) c.block(d, 0, d * (p - 1), d * (p - 1)).setIdentity();
  return c;
}

double sample_kurtosis(const Eigen::VectorXd& x) {
  const double n = static_cast<double>(x.size());
  double mean = x.mean();
  double m2 = (x.array() - mean).square().sum() / n;
  double m4 = (x.array() - mean).pow(4).sum() / n;
  return m4 / (m2 * m2);
}

}  // namespace

TEST_CASE("nonlinear recursions with unit innovations") {
  std::vector<double> ones(10, 1.0);
  auto ma1 = edclust::nonlinear_path(NonlinearModel::Ma1, ones);
  REQUIRE(ma1.size() == 10);
  CHECK(ma1[0] == 1.0);  // epsilon_0 = 0
  for (std::size_t t = 1; t < 10; ++t) CHECK(ma1[t] == doctest::Approx(0.6).epsilon(1e-15));

  auto nlma = edclust::nonlinear_path(NonlinearModel::Nlma, ones);
  CHECK(nlma[0] == 1.0);
  for (std::size_t t = 1; t < 10; ++t) CHECK(nlma[t] == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("tar and expar recursions match a direct replay") {
  PhiloxStream rng(7, 0);
  std::vector<double> eps(50);
  for (auto& v : eps) v = rng.next_normal();

  auto tar = edclust::nonlinear_path(NonlinearModel::Tar, eps);
  double x = 0.0;
  for (std::size_t t = 0; t < eps.size(); ++t) {
    x = (x <= 0.0 ? 0.5 * x : -2.0 * x) + eps[t];
    CHECK(tar[t] == x);
  }

  auto expar = edclust::nonlinear_path(NonlinearModel::Expar, eps);
  x = 0.0;
  for (std::size_t t = 0; t < eps.size(); ++t) {
    x = (0.3 - 10.0 * std::exp(-x * x)) * x + eps[t];
    CHECK(expar[t] == x);
  }
}

TEST_CASE("nlma long-run mean is 0.8") {
  auto x = edclust::gen_nonlinear(NonlinearModel::Nlma, 100000, 99, 0);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  CHECK(mean == doctest::Approx(0.8).epsilon(0.04));
}

TEST_CASE("arma recursion hand values") {
  std::vector<double> ones(6, 1.0);
  std::vector<double> ar = {0.5};
  std::vector<double> none;
  auto x = edclust::arma_path(ar, none, ones);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 1.5);
  CHECK(x[2] == 1.75);
  CHECK(x[3] == 1.875);

  std::vector<double> ma = {0.7};
  auto y = edclust::arma_path(none, ma, ones);
  CHECK(y[0] == 1.0);
  for (std::size_t t = 1; t < 6; ++t) CHECK(y[t] == doctest::Approx(1.7).epsilon(1e-15));

  std::vector<double> ar2 = {0.8};
  std::vector<double> ma2 = {0.2};
  auto z = edclust::arma_path(ar2, ma2, ones);
  CHECK(z[0] == 1.0);
  CHECK(z[1] == doctest::Approx(0.8 + 1.0 + 0.2).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(0.8 * 2.0 + 1.2).epsilon(1e-15));
}

TEST_CASE("causality gate") {
  std::vector<double> ok = {0.5};
  std::vector<double> bad = {1.2};
  std::vector<double> ar2 = {0.6, 0.2};
  std::vector<double> explosive2 = {0.6, 0.5};
  CHECK(edclust::is_causal(ok));
  CHECK_FALSE(edclust::is_causal(bad));
  CHECK(edclust::is_causal(ar2));
  CHECK_FALSE(edclust::is_causal(explosive2));

  std::vector<double> none;
  CHECK_THROWS_AS(edclust::gen_arma(bad, none, 100, 1), std::invalid_argument);
  CHECK_NOTHROW(edclust::gen_arma(ok, none, 100, 1));
}

TEST_CASE("generated ar(1) has the right lag-1 autocorrelation") {
  std::vector<double> ar = {0.5};
  std::vector<double> none;
  std::vector<double> devs;
  for (int seed = 0; seed < 50; ++seed) {
    auto x = edclust::gen_arma(ar, none, 100000, static_cast<std::uint64_t>(seed));
    devs.push_back(edclust::acf(x, 1)[0] - 0.5);
  }
  std::nth_element(devs.begin(), devs.begin() + 25, devs.end());
  CHECK(std::abs(devs[25]) <= 0.02);
}

TEST_CASE("var path recursion and zero-noise decay") {
  auto lags = edclust::var_coefficients(VarKind::Var2);
  REQUIRE(lags.size() == 2);

  // explicit small case first: X_t = B1 X_{t-1} + B2 X_{t-2} + eps_t
  Eigen::MatrixXd innovations = Eigen::MatrixXd::Zero(3, 10);
  innovations(0, 0) = 1.0;
  Eigen::MatrixXd init = Eigen::MatrixXd::Zero(2, 10);
  init(0, 3) = 2.0;  // X_0
  init(1, 7) = -1.0;  // X_{-1}
  auto path = edclust::var_path(lags, innovations, init);
  Eigen::RowVectorXd x1 =
      init.row(0) * lags[0].transpose() + init.row(1) * lags[1].transpose() + innovations.row(0);
  CHECK((path.row(0) - x1).cwiseAbs().maxCoeff() <= 1e-15);
  Eigen::RowVectorXd x2 = path.row(0) * lags[0].transpose() + init.row(0) * lags[1].transpose();
  CHECK((path.row(1) - x2).cwiseAbs().maxCoeff() <= 1e-15);

  // zero innovations decay geometrically from any start when stable
  Eigen::MatrixXd quiet = Eigen::MatrixXd::Zero(60, 10);
  Eigen::MatrixXd start = Eigen::MatrixXd::Ones(2, 10);
  auto decay = edclust::var_path(lags, quiet, start);
  CHECK(decay.row(59).norm() <= 1e-10 * decay.row(0).norm() + 1e-12);
  CHECK(decay.row(20).norm() < decay.row(5).norm());
}

TEST_CASE("var coefficient scaling") {
  auto var1 = edclust::var_coefficients(VarKind::Var1);
  REQUIRE(var1.size() == 1);
  REQUIRE(var1[0].rows() == 10);

  // grid entries keep their column-major layout after the uniform rescale
  Eigen::MatrixXd raw(10, 10);
  for (int idx = 0; idx < 100; ++idx)
    raw(idx % 10, idx / 10) = -1.0 + 2.0 * idx / 99.0;
  double norm_raw = spectral_norm_power_iteration(raw);
  CHECK((var1[0] - raw / (1.05 * norm_raw)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(spectral_norm_power_iteration(var1[0]) == doctest::Approx(1.0 / 1.05).epsilon(1e-10));

  auto var2 = edclust::var_coefficients(VarKind::Var2);
  Eigen::MatrixXd raw_b1(10, 10), raw_b2(10, 10);
  for (int idx = 0; idx < 100; ++idx) {
    raw_b1(idx % 10, idx / 10) = -1.0 + 1.0 * idx / 99.0;
    raw_b2(idx % 10, idx / 10) = 0.0 + 1.0 * idx / 99.0;
  }
  double sigma = spectral_norm_power_iteration(raw_b1 + raw_b2);
  double scale = 1.05 * sigma * sigma;  // largest eigenvalue of S S^T
  CHECK((var2[0] - raw_b1 / scale).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((var2[1] - raw_b2 / scale).cwiseAbs().maxCoeff() <= 1e-10);

  Eigen::MatrixXd s = var2[0] + var2[1];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s * s.transpose());
  CHECK(es.eigenvalues().maxCoeff() <= 1.0 / (1.05 * 1.05) + 1e-12);

  // companion systems are stable
  for (auto kind : {VarKind::Var1, VarKind::Var2}) {
    auto lags = edclust::var_coefficients(kind);
    Eigen::VectorXcd ev = companion(lags).eigenvalues();
    double radius = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev(i)));
    CHECK(radius < 1.0);
  }
}

TEST_CASE("gen_var respects lag-1 regression structure") {
  auto lags = edclust::var_coefficients(VarKind::Var1);
  auto x = edclust::gen_var(lags, NoiseKind::Normal, 20000, 5);
  REQUIRE(x.cols() == 10);
  REQUIRE(x.rows() == 20000);
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd g0 = x.transpose() * x / static_cast<double>(n);
  Eigen::MatrixXd g1 =
      x.bottomRows(n - 1).transpose() * x.topRows(n - 1) / static_cast<double>(n - 1);
  double rel = (g1 - lags[0] * g0).norm() / g0.norm();
  CHECK(rel <= 0.05);
}

TEST_CASE("student-t2 noise fattens the tails") {
  auto lags = edclust::var_coefficients(VarKind::Var1);
  auto normal = edclust::gen_var(lags, NoiseKind::Normal, 10000, 3);
  auto heavy = edclust::gen_var(lags, NoiseKind::StudentT2, 10000, 3);
  double k_normal = 0.0;
  double k_heavy = 0.0;
  for (int j = 0; j < 10; ++j) {
    k_normal = std::max(k_normal, sample_kurtosis(normal.col(j)));
    k_heavy = std::max(k_heavy, sample_kurtosis(heavy.col(j)));
  }
  CHECK(k_normal < 5.0);
  CHECK(k_heavy > 10.0);
}

TEST_CASE("experiments are deterministic and normalized") {
  for (auto scenario : {Scenario::Nonlinear16, Scenario::Arma20, Scenario::Var40}) {
    SimSpec spec;
    spec.scenario = scenario;
    spec.n = scenario == Scenario::Arma20 ? 400 : 150;
    spec.seed = 2024;
    auto a = edclust::build_experiment(spec);
    auto b = edclust::build_experiment(spec);
    CHECK(a.panel.values == b.panel.values);
    CHECK(a.truth.partition.labels == b.truth.partition.labels);

    edclust::set_max_threads(1);
    auto serial = edclust::build_experiment(spec);
    edclust::set_max_threads(4);
    auto threaded = edclust::build_experiment(spec);
    edclust::set_max_threads(0);
    CHECK(serial.panel.values == threaded.panel.values);

    SimSpec other = spec;
    other.seed = 2025;
    auto c = edclust::build_experiment(other);
    CHECK(a.panel.values != c.panel.values);

    for (Eigen::Index j = 0; j < a.panel.values.cols(); ++j) {
      double mean = a.panel.values.col(j).mean();
      double sd = std::sqrt((a.panel.values.col(j).array() - mean).square().sum() /
                            static_cast<double>(a.panel.values.rows() - 1));
      CHECK(std::abs(mean) <= 1e-12);
      CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("scenario shapes and ground truth") {
  SimSpec spec;
  spec.scenario = Scenario::Nonlinear16;
  spec.n = 100;
  auto e = edclust::build_experiment(spec);
  CHECK(e.panel.values.cols() == 16);
  CHECK(e.panel.values.rows() == 100);
  CHECK(e.truth.k0 == 4);
  CHECK(e.truth.partition.k() == 4);
  CHECK(e.panel.names[0] == "tar_1");
  CHECK(e.panel.names[15] == "nlma_4");
  for (int j = 0; j < 16; ++j)
    CHECK(e.truth.partition.labels[static_cast<std::size_t>(j)] == j / 4 + 1);

  spec.scenario = Scenario::Arma20;
  auto e2 = edclust::build_experiment(spec);
  CHECK(e2.panel.values.cols() == 20);
  CHECK(e2.truth.k0 == 5);

  spec.scenario = Scenario::Var40;
  auto e3 = edclust::build_experiment(spec);
  CHECK(e3.panel.values.cols() == 40);
  CHECK(e3.truth.k0 == 4);
  for (int j = 0; j < 40; ++j)
    CHECK(e3.truth.partition.labels[static_cast<std::size_t>(j)] == j / 10 + 1);

  spec.n = 5;
  CHECK_THROWS_AS(edclust::build_experiment(spec), std::invalid_argument);
}

TEST_CASE("scenario names round-trip") {
  for (auto s : {Scenario::Nonlinear16, Scenario::Arma20, Scenario::Var40})
    CHECK(edclust::parse_scenario(edclust::scenario_name(s)) == s);
  CHECK_THROWS_AS(edclust::parse_scenario("unknown"), std::invalid_argument);
}
