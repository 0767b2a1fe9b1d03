#pragma once

// Caravan prior over one level of wavelet coefficients and its Gibbs sampler.
//
//   Y_i | beta_i          ~ N(beta_i, sigma^2)
//   beta_i | theta, tau   ~ N(0, theta_i tau_i)
//   lambda_0 ~ IG(a0, b0),  theta_i | lambda_{i-1} ~ IG(a, a / lambda_{i-1}),
//   lambda_i | theta_i ~ IG(a, a / theta_i)
//   tau_i | tau_gl ~ IG(tau_gl, tau_gl),  tau_gl ~ Gamma(a_gl, b_gl),  a ~ Gamma(a_a, b_a)
//
// Indices are 0-based: theta_i is preceded by lambda_i and followed by
// lambda_{i+1} (the last theta has no successor).

#include "caravan/rng.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace caravan {

using Eigen::VectorXd;

struct CaravanHyper {
  double a0 = 0.1, b0 = 0.1;
  double a_a = 0.1, b_a = 0.1;
  double a_gl = 0.1, b_gl = 0.1;
  double c_a = 1.5, c_gl = 2.5;

  void validate() const;
};

struct ChainConfig {
  int iterations = 30000;
  int burn_in = 10000;
  int thinning = 1;
  std::uint64_t seed = 1;

  /// Defaults: first third discarded as burn-in, no thinning.
  static ChainConfig with_iterations(int iterations, std::uint64_t seed = 1) {
    return ChainConfig{iterations, iterations / 3, 1, seed};
  }

  int retained() const { return (iterations - burn_in) / thinning; }
  void validate() const;
};

struct CaravanState {
  VectorXd beta;
  VectorXd theta;
  VectorXd lambda;
  VectorXd tau;
  double tau_gl = 1.0;
  double a = 1.0;

  Eigen::Index size() const { return beta.size(); }
  bool valid() const;
};

struct PosteriorSummary {
  VectorXd mean;
  VectorXd median;
  double acceptance_rate_a = 0.0;
  double acceptance_rate_tau_gl = 0.0;
  int retained_samples = 0;
};

struct DiagnosticsConfig {
  /// 0-based coefficient indices whose traces are kept; clipped to n.
  std::vector<int> tracked_beta = {0, 1, 2, 3};
  int max_lag = 50;
};

struct ParameterSeries {
  std::string name;
  std::vector<int> iteration;  // 1-based sweep index of each retained draw
  std::vector<double> trace;
  std::vector<double> autocorrelation;
  std::vector<double> running_mean;
};

struct Diagnostics {
  std::vector<ParameterSeries> parameters;

  const ParameterSeries* find(const std::string& name) const;
};

/// Floor applied to inverse-gamma rates and to theta * tau before division.
inline constexpr double kRateFloor = 1e-300;

/// beta = y; theta, lambda, tau = 1; a = tau_gl = 1.
CaravanState init_state(const Eigen::Ref<const VectorXd>& y, const CaravanHyper& hyper, Rng& rng);

/// Normal full conditional with variance v = 1/(1/(theta tau) + 1/sigma^2)
/// and mean v * y / sigma^2.
void update_beta(CaravanState& state, const Eigen::Ref<const VectorXd>& y, double sigma_hat, Rng& rng);
void update_theta(CaravanState& state, Rng& rng);
void update_lambda(CaravanState& state, const CaravanHyper& hyper, Rng& rng);
void update_tau(CaravanState& state, Rng& rng);

/// Log full conditional of log(tau_gl), Jacobian included, up to a constant.
double log_target_log_tau_gl(double log_tau_gl, const CaravanState& state, const CaravanHyper& hyper);
/// Log full conditional of log(a), Jacobian included, up to a constant.
double log_target_log_a(double log_a, const CaravanState& state, const CaravanHyper& hyper);

/// Random-walk step size c / log2(n); levels with n < 2 use c.
double mh_step_size(double c, Eigen::Index n);

/// Gaussian random-walk Metropolis step on the log scale. `log_target`
/// must be a cheap callable; returns whether the proposal was accepted.
template <typename LogTarget>
bool random_walk_step(double& x, double step, double z, double log_u, LogTarget&& log_target) {
  const double proposal = x + step * z;
  const double lp = log_target(proposal);
  if (!std::isfinite(lp)) return false;
  const double lc = log_target(x);
  if (log_u < lp - lc) {
    x = proposal;
    return true;
  }
  return false;
}

bool mwg_update_tau_gl(CaravanState& state, const CaravanHyper& hyper, Rng& rng);
bool mwg_update_a(CaravanState& state, const CaravanHyper& hyper, Rng& rng);

struct GibbsOutput {
  PosteriorSummary summary;
  Diagnostics diagnostics;
};

/// Full sweeps in the order beta, theta, lambda, tau, tau_gl, a.
/// Deterministic given config.seed.
GibbsOutput gibbs_run(const Eigen::Ref<const VectorXd>& y, double sigma_hat, const CaravanHyper& hyper,
                      const ChainConfig& config, const DiagnosticsConfig& diag_config = {});

/// Sample autocorrelation at lags 0..max_lag (lag 0 is exactly 1).
std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag);
std::vector<double> running_mean(const std::vector<double>& x);

/// Median with linear interpolation between the two middle order statistics.
double median(std::vector<double> values);

struct DiagnosticsCsv {
  std::string trace;         // iteration,parameter,value
  std::string acf;           // lag,parameter,acf
  std::string running_mean;  // iteration,parameter,running_mean
};
DiagnosticsCsv diagnostics_csv(const Diagnostics& diag);

/// Writes <prefix>_trace.csv, <prefix>_acf.csv and <prefix>_running_mean.csv.
/// Returns the written paths.
std::vector<std::filesystem::path> export_diagnostics(const Diagnostics& diag, const std::filesystem::path& prefix);

}  // namespace caravan
