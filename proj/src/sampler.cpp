#include "caravan/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace caravan {

namespace {

double floored(double rate) { return std::max(rate, kRateFloor); }

double draw_inverse_gamma(Rng& rng, double shape, double scale) {
  return std::max(rng.inverse_gamma(shape, floored(scale)), kRateFloor);
}

// Sum over all 2n-1 chain edges (parent, child) of log(parent child) + 1/(parent child).
double chain_edge_statistic(const CaravanState& s) {
  const Eigen::Index n = s.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = s.lambda(i) * s.theta(i);
    total += std::log(p) + 1.0 / p;
    if (i + 1 < n) {
      const double q = s.theta(i) * s.lambda(i + 1);
      total += std::log(q) + 1.0 / q;
    }
  }
  return total;
}

double tau_statistic(const CaravanState& s) {
  return (s.tau.array().log() + s.tau.array().inverse()).sum();
}

double log_tau_gl_density(double x, double n, double stat, const CaravanHyper& h) {
  const double t = std::exp(x);
  if (!std::isfinite(t) || t <= 0.0) return -INFINITY;
  return x - n * std::lgamma(t) + (n * t + h.a_gl - 1.0) * x - t * (h.b_gl + stat);
}

double log_a_density(double x, double n, double stat, const CaravanHyper& h) {
  const double a = std::exp(x);
  if (!std::isfinite(a) || a <= 0.0) return -INFINITY;
  const double edges = 2.0 * n - 1.0;
  return x + (h.a_a - 1.0 + edges * a) * x - edges * std::lgamma(a) - a * (h.b_a + stat);
}

}  // namespace

void CaravanHyper::validate() const {
  for (double v : {a0, b0, a_a, b_a, a_gl, b_gl, c_a, c_gl}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("caravan hyperparameters must be positive and finite");
  }
}

void ChainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) throw std::invalid_argument("burn-in must satisfy 0 <= burn_in < iterations");
  if (thinning < 1) throw std::invalid_argument("thinning must be positive");
  if (retained() < 1) throw std::invalid_argument("chain configuration retains no samples");
}

bool CaravanState::valid() const {
  const Eigen::Index n = size();
  if (n < 1 || theta.size() != n || lambda.size() != n || tau.size() != n) return false;
  auto positive = [](const VectorXd& v) { return v.allFinite() && (v.array() > 0.0).all(); };
  return beta.allFinite() && positive(theta) && positive(lambda) && positive(tau) && std::isfinite(tau_gl) &&
         tau_gl > 0.0 && std::isfinite(a) && a > 0.0;
}

const ParameterSeries* Diagnostics::find(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return &p;
  return nullptr;
}

CaravanState init_state(const Eigen::Ref<const VectorXd>& y, const CaravanHyper& hyper, Rng& /*rng*/) {
  hyper.validate();
  const Eigen::Index n = y.size();
  if (n < 1) throw std::invalid_argument("caravan sampler needs at least one coefficient");
  CaravanState s;
  s.beta = y;
  s.theta = VectorXd::Ones(n);
  s.lambda = VectorXd::Ones(n);
  s.tau = VectorXd::Ones(n);
  s.tau_gl = 1.0;
  s.a = 1.0;
  return s;
}

void update_beta(CaravanState& s, const Eigen::Ref<const VectorXd>& y, double sigma_hat, Rng& rng) {
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) throw std::invalid_argument("sigma_hat must be positive");
  const double inv_noise = 1.0 / (sigma_hat * sigma_hat);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double prior_var = std::max(s.theta(i) * s.tau(i), kRateFloor);
    const double var = 1.0 / (1.0 / prior_var + inv_noise);
    s.beta(i) = var * y(i) * inv_noise + std::sqrt(var) * rng.normal();
  }
}

void update_theta(CaravanState& s, Rng& rng) {
  const Eigen::Index n = s.size();
  const double a = s.a;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double data = s.beta(i) * s.beta(i) / (2.0 * s.tau(i));
    if (i + 1 < n) {
      s.theta(i) = draw_inverse_gamma(rng, 2.0 * a + 0.5, a / s.lambda(i) + a / s.lambda(i + 1) + data);
    } else {
      s.theta(i) = draw_inverse_gamma(rng, a + 0.5, a / s.lambda(i) + data);
    }
  }
}

void update_lambda(CaravanState& s, const CaravanHyper& h, Rng& rng) {
  const double a = s.a;
  s.lambda(0) = draw_inverse_gamma(rng, h.a0 + a, h.b0 + a / s.theta(0));
  for (Eigen::Index i = 1; i < s.size(); ++i) {
    s.lambda(i) = draw_inverse_gamma(rng, 2.0 * a, a / s.theta(i - 1) + a / s.theta(i));
  }
}

void update_tau(CaravanState& s, Rng& rng) {
  const double g = s.tau_gl;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s.tau(i) = draw_inverse_gamma(rng, g + 0.5, g + s.beta(i) * s.beta(i) / (2.0 * s.theta(i)));
  }
}

double log_target_log_tau_gl(double x, const CaravanState& s, const CaravanHyper& h) {
  return log_tau_gl_density(x, static_cast<double>(s.size()), tau_statistic(s), h);
}

double log_target_log_a(double x, const CaravanState& s, const CaravanHyper& h) {
  return log_a_density(x, static_cast<double>(s.size()), chain_edge_statistic(s), h);
}

double mh_step_size(double c, Eigen::Index n) {
  return n < 2 ? c : c / std::log2(static_cast<double>(n));
}

bool mwg_update_tau_gl(CaravanState& s, const CaravanHyper& h, Rng& rng) {
  const double n = static_cast<double>(s.size());
  const double stat = tau_statistic(s);
  const double z = rng.normal();
  const double log_u = std::log(rng.uniform());
  double x = std::log(s.tau_gl);
  const bool accepted = random_walk_step(x, mh_step_size(h.c_gl, s.size()), z, log_u,
                                         [&](double v) { return log_tau_gl_density(v, n, stat, h); });
  if (accepted) s.tau_gl = std::exp(x);
  return accepted;
}

bool mwg_update_a(CaravanState& s, const CaravanHyper& h, Rng& rng) {
  const double n = static_cast<double>(s.size());
  const double stat = chain_edge_statistic(s);
  const double z = rng.normal();
  const double log_u = std::log(rng.uniform());
  double x = std::log(s.a);
  const bool accepted = random_walk_step(x, mh_step_size(h.c_a, s.size()), z, log_u,
                                         [&](double v) { return log_a_density(v, n, stat, h); });
  if (accepted) s.a = std::exp(x);
  return accepted;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sequence");
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  const double upper = v[m];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + m);
  return 0.5 * (lower + upper);
}

GibbsOutput gibbs_run(const Eigen::Ref<const VectorXd>& y, double sigma_hat, const CaravanHyper& hyper,
                      const ChainConfig& config, const DiagnosticsConfig& diag_config) {
  config.validate();
  hyper.validate();
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) throw std::invalid_argument("sigma_hat must be positive");
  if (!y.allFinite()) throw std::invalid_argument("observations must be finite");

  Rng rng(config.seed);
  CaravanState state = init_state(y, hyper, rng);
  const Eigen::Index n = state.size();
  const int kept = config.retained();

  // Coordinate-major draw store for the per-coefficient medians.
  std::vector<double> draws(static_cast<std::size_t>(n) * kept);
  VectorXd sum = VectorXd::Zero(n);

  std::vector<int> tracked;
  for (int idx : diag_config.tracked_beta)
    if (idx >= 0 && idx < n) tracked.push_back(idx);

  Diagnostics diag;
  diag.parameters.push_back({"a", {}, {}, {}, {}});
  diag.parameters.push_back({"tau_gl", {}, {}, {}, {}});
  for (int idx : tracked) diag.parameters.push_back({"beta[" + std::to_string(idx + 1) + "]", {}, {}, {}, {}});
  for (auto& p : diag.parameters) {
    p.iteration.reserve(kept);
    p.trace.reserve(kept);
  }

  long accepted_a = 0, accepted_gl = 0;
  int k = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    update_beta(state, y, sigma_hat, rng);
    update_theta(state, rng);
    update_lambda(state, hyper, rng);
    update_tau(state, rng);
    accepted_gl += mwg_update_tau_gl(state, hyper, rng);
    accepted_a += mwg_update_a(state, hyper, rng);

    if (it <= config.burn_in || (it - config.burn_in) % config.thinning != 0) continue;
    sum += state.beta;
    for (Eigen::Index i = 0; i < n; ++i) draws[static_cast<std::size_t>(i) * kept + k] = state.beta(i);
    diag.parameters[0].trace.push_back(state.a);
    diag.parameters[1].trace.push_back(state.tau_gl);
    for (std::size_t t = 0; t < tracked.size(); ++t) diag.parameters[2 + t].trace.push_back(state.beta(tracked[t]));
    for (auto& p : diag.parameters) p.iteration.push_back(it);
    ++k;
  }

  GibbsOutput out;
  auto& summary = out.summary;
  summary.retained_samples = kept;
  summary.mean = sum / static_cast<double>(kept);
  summary.median.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto first = draws.begin() + static_cast<std::ptrdiff_t>(i) * kept;
    summary.median(i) = median(std::vector<double>(first, first + kept));
  }
  summary.acceptance_rate_a = static_cast<double>(accepted_a) / config.iterations;
  summary.acceptance_rate_tau_gl = static_cast<double>(accepted_gl) / config.iterations;

  for (auto& p : diag.parameters) {
    p.autocorrelation = autocorrelation(p.trace, std::min(diag_config.max_lag, kept - 1));
    p.running_mean = running_mean(p.trace);
  }
  out.diagnostics = std::move(diag);
  return out;
}

}  // namespace caravan
