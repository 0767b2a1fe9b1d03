#pragma once

#include "caravan/sampler.hpp"
#include "caravan/wavelet.hpp"

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

namespace caravan {

enum class Method { CaravanMean, CaravanMedian, HardThreshold, SoftThreshold };
enum class ThresholdMode { Hard, Soft };

/// MadLevel1: one sigma from DWT level 1, shared by all levels.
/// MadEachLevel: MODWT, separate MAD per level.
/// MadLevel1Scaled: MODWT, sigma_j^2 = 2^{1-j} sigma_1^2 from level-1 MAD.
enum class SigmaMode { MadLevel1, MadEachLevel, MadLevel1Scaled };

std::string_view to_string(Method m);
std::string_view to_string(SigmaMode m);
Method parse_method(std::string_view text);
SigmaMode parse_sigma_mode(std::string_view text);
bool is_caravan(Method m);

/// Normal-consistency constant Phi^{-1}(3/4).
inline constexpr double kMadNormalConstant = 0.6744897501960817;

struct DenoiseConfig {
  TransformKind transform = TransformKind::DWT;
  FilterName filter = FilterName::LA8;
  int levels = 6;
  Method method = Method::CaravanMean;
  ChainConfig chain = ChainConfig::with_iterations(30000);
  CaravanHyper hyper;
  SigmaMode sigma_mode = SigmaMode::MadLevel1;
  bool align = false;
  /// Known noise level of the input; bypasses the MAD estimate when set.
  std::optional<double> sigma_override;
  /// Replicate index mixed into the per-level chain seeds.
  std::uint64_t replicate = 0;
  /// Worker threads for per-level chains (results do not depend on it).
  int threads = 1;
  DiagnosticsConfig diagnostics;

  /// Default sigma mode for the transform (MadLevel1 for DWT, MadEachLevel for MODWT).
  static SigmaMode default_sigma_mode(TransformKind kind);
  void validate() const;
};

struct DenoiseResult {
  Eigen::VectorXd estimate;
  std::vector<double> sigma_estimates;  // per level, finest first
  std::vector<PosteriorSummary> level_summaries;
  std::vector<Diagnostics> level_diagnostics;
  /// Caravan runs reconstruct both point estimates.
  std::optional<Eigen::VectorXd> mean_estimate;
  std::optional<Eigen::VectorXd> median_estimate;
};

/// median(|c - median(c)|) / Phi^{-1}(3/4). Throws when the MAD is zero.
double estimate_sigma_mad(const Eigen::Ref<const Eigen::VectorXd>& coeffs);

/// Universal threshold sigma * sqrt(2 ln n), n = sample_size (defaults to
/// the number of coefficients).
double universal_threshold_level(double sigma, Eigen::Index sample_size);

Eigen::VectorXd universal_threshold(const Eigen::Ref<const Eigen::VectorXd>& coeffs, double sigma, ThresholdMode mode,
                                    Eigen::Index sample_size = -1);

/// Per-level noise levels for a forward decomposition under `mode`.
std::vector<double> estimate_level_sigmas(const WaveletDecomposition<double>& d, SigmaMode mode);

DenoiseResult denoise(const Eigen::Ref<const Eigen::VectorXd>& x, const DenoiseConfig& config);

double peak_height(const Eigen::Ref<const Eigen::VectorXd>& estimate);

/// Seed of the chain for one level: hash(master seed, level, replicate).
std::uint64_t level_seed(std::uint64_t master, int level, std::uint64_t replicate);

}  // namespace caravan
