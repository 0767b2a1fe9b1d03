#include "caravan/denoise.hpp"

#include "caravan/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace caravan {

namespace {

std::string lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::CaravanMean: return "caravan-mean";
    case Method::CaravanMedian: return "caravan-median";
    case Method::HardThreshold: return "hard";
    case Method::SoftThreshold: return "soft";
  }
  throw std::invalid_argument("unknown method");
}

std::string_view to_string(SigmaMode m) {
  switch (m) {
    case SigmaMode::MadLevel1: return "mad-level1";
    case SigmaMode::MadEachLevel: return "mad-each";
    case SigmaMode::MadLevel1Scaled: return "mad-scaled";
  }
  throw std::invalid_argument("unknown sigma mode");
}

Method parse_method(std::string_view text) {
  const auto s = lower(text);
  if (s == "caravan-mean") return Method::CaravanMean;
  if (s == "caravan-median") return Method::CaravanMedian;
  if (s == "hard") return Method::HardThreshold;
  if (s == "soft") return Method::SoftThreshold;
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "' (expected caravan-mean, caravan-median, hard or soft)");
}

SigmaMode parse_sigma_mode(std::string_view text) {
  const auto s = lower(text);
  if (s == "mad-level1") return SigmaMode::MadLevel1;
  if (s == "mad-each") return SigmaMode::MadEachLevel;
  if (s == "mad-scaled") return SigmaMode::MadLevel1Scaled;
  throw std::invalid_argument("unknown sigma mode '" + std::string(text) +
                              "' (expected mad-level1, mad-each or mad-scaled)");
}

bool is_caravan(Method m) { return m == Method::CaravanMean || m == Method::CaravanMedian; }

SigmaMode DenoiseConfig::default_sigma_mode(TransformKind kind) {
  return kind == TransformKind::DWT ? SigmaMode::MadLevel1 : SigmaMode::MadEachLevel;
}

void DenoiseConfig::validate() const {
  if (levels < 1) throw std::invalid_argument("levels must be at least 1");
  if (transform == TransformKind::DWT && sigma_mode != SigmaMode::MadLevel1) {
    throw std::invalid_argument("DWT de-noising uses sigma mode mad-level1");
  }
  if (transform == TransformKind::MODWT && sigma_mode == SigmaMode::MadLevel1) {
    throw std::invalid_argument("MODWT de-noising uses sigma mode mad-each or mad-scaled");
  }
  if (sigma_override && !(*sigma_override >= 0.0 && std::isfinite(*sigma_override))) {
    throw std::invalid_argument("sigma override must be non-negative and finite");
  }
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (is_caravan(method)) {
    chain.validate();
    hyper.validate();
  }
}

double estimate_sigma_mad(const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (coeffs.size() < 1) throw std::invalid_argument("MAD of an empty coefficient set");
  std::vector<double> v(coeffs.data(), coeffs.data() + coeffs.size());
  const double m = median(v);
  for (double& c : v) c = std::abs(c - m);
  const double mad = median(std::move(v));
  if (!(mad > 0.0)) {
    throw std::invalid_argument("degenerate noise estimate: median absolute deviation is zero");
  }
  return mad / kMadNormalConstant;
}

double universal_threshold_level(double sigma, Eigen::Index sample_size) {
  if (sample_size < 1) throw std::invalid_argument("universal threshold needs n >= 1");
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(sample_size)));
}

Eigen::VectorXd universal_threshold(const Eigen::Ref<const Eigen::VectorXd>& coeffs, double sigma, ThresholdMode mode,
                                    Eigen::Index sample_size) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  const double thr = universal_threshold_level(sigma, sample_size < 0 ? coeffs.size() : sample_size);
  Eigen::VectorXd out(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double c = coeffs(i);
    if (mode == ThresholdMode::Hard) {
      out(i) = std::abs(c) <= thr && thr > 0.0 ? 0.0 : c;
    } else {
      out(i) = std::copysign(std::max(std::abs(c) - thr, 0.0), c);
    }
  }
  return out;
}

std::vector<double> estimate_level_sigmas(const WaveletDecomposition<double>& d, SigmaMode mode) {
  std::vector<double> sig(d.levels());
  switch (mode) {
    case SigmaMode::MadLevel1:
      std::fill(sig.begin(), sig.end(), estimate_sigma_mad(d.wavelet[0]));
      break;
    case SigmaMode::MadEachLevel:
      for (int j = 0; j < d.levels(); ++j) sig[j] = estimate_sigma_mad(d.wavelet[j]);
      break;
    case SigmaMode::MadLevel1Scaled: {
      const double s1 = estimate_sigma_mad(d.wavelet[0]);
      for (int j = 1; j <= d.levels(); ++j) sig[j - 1] = std::sqrt(std::ldexp(s1 * s1, 1 - j));
      break;
    }
  }
  return sig;
}

std::uint64_t level_seed(std::uint64_t master, int level, std::uint64_t replicate) {
  return derive_seed(master, static_cast<std::uint64_t>(level), replicate);
}

DenoiseResult denoise(const Eigen::Ref<const Eigen::VectorXd>& x, const DenoiseConfig& config) {
  config.validate();
  if (!x.allFinite()) throw std::invalid_argument("input contains non-finite values");
  const auto filter = make_filter<double>(config.filter);
  const Eigen::VectorXd input = x;
  auto decomposition = forward(config.transform, input, filter, config.levels);
  const int J = decomposition.levels();

  DenoiseResult result;
  if (config.sigma_override) {
    result.sigma_estimates.resize(J);
    for (int j = 1; j <= J; ++j) {
      result.sigma_estimates[j - 1] = config.transform == TransformKind::DWT
                                          ? *config.sigma_override
                                          : *config.sigma_override * std::pow(2.0, -0.5 * j);
    }
  } else {
    result.sigma_estimates = estimate_level_sigmas(decomposition, config.sigma_mode);
  }

  // Alignment only relabels coefficients; the chains see the aligned order.
  if (config.align) decomposition = align(decomposition);

  auto mean_coeffs = decomposition;
  auto median_coeffs = decomposition;
  const bool caravan = is_caravan(config.method);
  if (caravan) {
    result.level_summaries.resize(J);
    result.level_diagnostics.resize(J);
  }

  parallel_for(J, config.threads, [&](int idx) {
    const int level = idx + 1;
    const auto& y = decomposition.wavelet[idx];
    const double sigma = result.sigma_estimates[idx];
    if (caravan) {
      ChainConfig chain = config.chain;
      chain.seed = level_seed(config.chain.seed, level, config.replicate);
      auto run = gibbs_run(y, sigma, config.hyper, chain, config.diagnostics);
      mean_coeffs.wavelet[idx] = run.summary.mean;
      median_coeffs.wavelet[idx] = run.summary.median;
      result.level_summaries[idx] = std::move(run.summary);
      result.level_diagnostics[idx] = std::move(run.diagnostics);
    } else {
      const auto mode = config.method == Method::HardThreshold ? ThresholdMode::Hard : ThresholdMode::Soft;
      mean_coeffs.wavelet[idx] = universal_threshold(y, sigma, mode, decomposition.original_length);
    }
  });

  auto reconstruct = [&](WaveletDecomposition<double> d) {
    if (d.aligned) d = unalign(d);
    return inverse(d);
  };
  if (caravan) {
    result.mean_estimate = reconstruct(std::move(mean_coeffs));
    result.median_estimate = reconstruct(std::move(median_coeffs));
    result.estimate = config.method == Method::CaravanMean ? *result.mean_estimate : *result.median_estimate;
  } else {
    result.estimate = reconstruct(std::move(mean_coeffs));
  }
  return result;
}

double peak_height(const Eigen::Ref<const Eigen::VectorXd>& estimate) {
  if (estimate.size() < 1) throw std::invalid_argument("peak height of an empty sequence");
  return estimate.maxCoeff();
}

}  // namespace caravan
