#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "edclust/hclust.hpp"

namespace edclust {

enum class Scenario { Nonlinear16, Arma20, Var40 };
enum class NonlinearModel { Tar, Expar, Ma1, Nlma };
enum class NoiseKind { Normal, StudentT2 };
enum class VarKind { Var1, Var2 };

struct SimSpec {
  Scenario scenario = Scenario::Nonlinear16;
  int n = 200;
  std::uint64_t seed = 0;
  int burn_in = 500;
};

struct GroundTruth {
  Partition partition;
  int k0 = 0;
};

struct Experiment {
  TimeSeriesPanel panel;
  GroundTruth truth;
};

// Deterministic recursions driven by an explicit innovation sequence
// (epsilon_1, epsilon_2, ...), with zero pre-sample state (X_0 = 0,
// epsilon_0 = 0).  Output element t-1 is X_t.  These are the test hooks; the
// gen_* functions below draw the innovations from a seeded stream and
// discard a burn-in prefix.
std::vector<double> nonlinear_path(NonlinearModel model, std::span<const double> innovations);
std::vector<double> arma_path(std::span<const double> ar, std::span<const double> ma,
                              std::span<const double> innovations);

// X_t = sum_i lags[i] * X_{t-i-1} + eps_t.  innovations: one row per step;
// init: one row per AR order (row 0 = X_0, row 1 = X_{-1}).
Eigen::MatrixXd var_path(const std::vector<Eigen::MatrixXd>& lags,
                         const Eigen::MatrixXd& innovations, const Eigen::MatrixXd& init);

// Causality of the AR polynomial: companion-matrix spectral radius < 1.
bool is_causal(std::span<const double> ar);

std::vector<double> gen_nonlinear(NonlinearModel model, int n, std::uint64_t seed,
                                  std::uint64_t stream = 0, int burn_in = 500);
std::vector<double> gen_arma(std::span<const double> ar, std::span<const double> ma, int n,
                             std::uint64_t seed, std::uint64_t stream = 0, int burn_in = 500);

// Coefficients of the 10-dimensional VAR scenarios: entries are equally
// spaced grids filled column-major, rescaled by a 5% stability margin
// (VAR1: spectral norm to 1/1.05; VAR2: both matrices divided by
// 1.05 * lambda_max((B1+B2)(B1+B2)^T), which makes the companion system
// comfortably stable).
std::vector<Eigen::MatrixXd> var_coefficients(VarKind kind);

// 10-column VAR sample; noise column c draws from stream stream_base + c, so
// panels assemble identically regardless of generation order.
Eigen::MatrixXd gen_var(const std::vector<Eigen::MatrixXd>& lags, NoiseKind noise, int n,
                        std::uint64_t seed, std::uint64_t stream_base = 0, int burn_in = 500);

// Assembles the full scenario panel (already normalized) and ground truth:
//   Nonlinear16: TAR/EXPAR/MA1/NLMA x 4 replicas, K0 = 4;
//   Arma20: AR(1) .5 / MA(1) .7 / AR(2) .6,.2 / MA(2) .8,-.6 /
//           ARMA(1,1) .8,.2 x 4 replicas, K0 = 5;
//   Var40: VAR1-normal / VAR1-t2 / VAR2-normal / VAR2-t2 x 10 components,
//          K0 = 4.
Experiment build_experiment(const SimSpec& spec);

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

}  // namespace edclust
