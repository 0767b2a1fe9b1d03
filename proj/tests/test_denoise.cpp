#include "caravan/bench.hpp"
#include "caravan/denoise.hpp"

#include <doctest.h>

#include <cmath>

using namespace caravan;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

DenoiseConfig quick(TransformKind kind, Method method, int levels, int iterations = 1500) {
  DenoiseConfig c;
  c.transform = kind;
  c.method = method;
  c.levels = levels;
  c.sigma_mode = DenoiseConfig::default_sigma_mode(kind);
  c.chain = ChainConfig::with_iterations(iterations, 17);
  return c;
}

}  // namespace

TEST_CASE("MAD noise estimate") {
  // |c - median| = {2,1,0,1,97}: MAD 1.
  CHECK(estimate_sigma_mad(vec({1, 2, 3, 4, 100})) == doctest::Approx(1.0 / 0.6744897501960817));
  CHECK(estimate_sigma_mad(vec({-1, 1})) == doctest::Approx(1.0 / 0.6744897501960817));
  CHECK_THROWS_WITH_AS(estimate_sigma_mad(vec({5, 5, 5, 5})), doctest::Contains("degenerate"), std::invalid_argument);

  Rng rng(1);
  VectorXd z(200000);
  for (auto& v : z) v = 2.5 * rng.normal();
  CHECK(estimate_sigma_mad(z) == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("universal threshold") {
  const double thr = std::sqrt(2.0 * std::log(4.0));
  CHECK(universal_threshold_level(1.0, 4) == doctest::Approx(thr));
  const VectorXd c = vec({0.5, -2.0, 1.6, -1.0});
  const VectorXd hard = universal_threshold(c, 1.0, ThresholdMode::Hard);
  CHECK(hard == vec({0.0, -2.0, 0.0, 0.0}));
  const VectorXd soft = universal_threshold(c, 1.0, ThresholdMode::Soft);
  CHECK(soft(0) == 0.0);
  CHECK(soft(1) == doctest::Approx(-(2.0 - thr)));
  CHECK(soft(2) == 0.0);
  // The sample size of the threshold can differ from the coefficient count.
  CHECK(universal_threshold(c, 1.0, ThresholdMode::Hard, 1)(0) == 0.5);
  CHECK(universal_threshold(c, 0.0, ThresholdMode::Hard) == c);
  CHECK_THROWS_AS(universal_threshold(c, -1.0, ThresholdMode::Hard), std::invalid_argument);
}

TEST_CASE("per-level sigma modes") {
  Rng rng(2);
  VectorXd x(512);
  for (auto& v : x) v = rng.normal();
  const auto f = make_filter<double>(FilterName::LA8);

  const auto dwt = dwt_forward(x, f, 4);
  const auto s_dwt = estimate_level_sigmas(dwt, SigmaMode::MadLevel1);
  for (double s : s_dwt) CHECK(s == s_dwt[0]);
  CHECK(s_dwt[0] == doctest::Approx(estimate_sigma_mad(dwt.wavelet[0])));

  const auto modwt = modwt_forward(x, f, 4);
  const auto each = estimate_level_sigmas(modwt, SigmaMode::MadEachLevel);
  const auto scaled = estimate_level_sigmas(modwt, SigmaMode::MadLevel1Scaled);
  for (int j = 1; j <= 4; ++j) {
    CHECK(each[j - 1] == doctest::Approx(estimate_sigma_mad(modwt.wavelet[j - 1])));
    CHECK(scaled[j - 1] * scaled[j - 1] == doctest::Approx(std::pow(2.0, 1 - j) * each[0] * each[0]));
    // White noise: MODWT level-j coefficients have variance 2^{-j}.
    CHECK(each[j - 1] == doctest::Approx(std::pow(2.0, -0.5 * j)).epsilon(0.15));
  }
}

TEST_CASE("configuration validation") {
  DenoiseConfig c;
  CHECK_NOTHROW(c.validate());
  c.sigma_mode = SigmaMode::MadEachLevel;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.transform = TransformKind::MODWT;
  CHECK_NOTHROW(c.validate());
  c.sigma_mode = SigmaMode::MadLevel1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = DenoiseConfig{};
  c.levels = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = DenoiseConfig{};
  c.chain.burn_in = c.chain.iterations;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.method = Method::HardThreshold;  // chain settings are irrelevant for thresholding
  CHECK_NOTHROW(c.validate());

  CHECK(parse_method("caravan-median") == Method::CaravanMedian);
  CHECK_THROWS_WITH_AS(parse_method("ebayes"), doctest::Contains("ebayes"), std::invalid_argument);
  CHECK(parse_sigma_mode("mad-scaled") == SigmaMode::MadLevel1Scaled);
  CHECK(to_string(Method::SoftThreshold) == "soft");
}

TEST_CASE("hard thresholding through denoise matches a manual pipeline") {
  const auto truth = gen_test_function({TestFunctionName::Doppler}, 512);
  Rng rng(3);
  const auto noisy = add_noise(truth, 7.0, rng);
  auto c = quick(TransformKind::DWT, Method::HardThreshold, 6);
  const auto r = denoise(noisy.values, c);

  const auto f = make_filter<double>(FilterName::LA8);
  auto d = dwt_forward(noisy.values, f, 6);
  const double sigma = estimate_sigma_mad(d.wavelet[0]);
  for (auto& w : d.wavelet) w = universal_threshold(w, sigma, ThresholdMode::Hard, 512);
  CHECK((r.estimate - dwt_inverse(d)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.sigma_estimates.size() == 6);
  CHECK(r.sigma_estimates[0] == doctest::Approx(sigma));
  CHECK(!r.mean_estimate);
  // Scaling coefficients pass through: the estimate keeps the input mean.
  CHECK(r.estimate.mean() == doctest::Approx(noisy.values.mean()).epsilon(1e-10));
  CHECK(squared_error(r.estimate, truth) < squared_error(noisy.values, truth));
}

TEST_CASE("caravan de-noising reduces error for both transforms") {
  const auto truth = gen_test_function({TestFunctionName::Bumps}, 512);
  Rng rng(4);
  const auto noisy = add_noise(truth, 7.0, rng);
  for (auto kind : {TransformKind::DWT, TransformKind::MODWT}) {
    auto c = quick(kind, Method::CaravanMean, 4, 3000);
    const auto r = denoise(noisy.values, c);
    CAPTURE(to_string(kind));
    REQUIRE(r.mean_estimate);
    REQUIRE(r.median_estimate);
    CHECK(r.estimate == *r.mean_estimate);
    CHECK(r.level_summaries.size() == 4);
    CHECK(r.level_diagnostics.size() == 4);
    const double bound = (kind == TransformKind::DWT ? 0.6 : 0.8) * squared_error(noisy.values, truth);
    CHECK(squared_error(r.estimate, truth) < bound);
    CHECK(squared_error(*r.median_estimate, truth) < bound);
  }
}

TEST_CASE("denoise is deterministic and independent of the thread count") {
  const auto truth = gen_test_function({TestFunctionName::Blocks}, 256);
  Rng rng(5);
  const auto noisy = add_noise(truth, 3.0, rng);
  auto c = quick(TransformKind::DWT, Method::CaravanMedian, 4);
  const auto a = denoise(noisy.values, c);
  c.threads = 3;
  const auto b = denoise(noisy.values, c);
  CHECK(a.estimate == b.estimate);
  c.replicate = 1;
  CHECK(denoise(noisy.values, c).estimate != a.estimate);
  CHECK(level_seed(1, 2, 0) != level_seed(1, 3, 0));
}

TEST_CASE("alignment is a relabelling for thresholding") {
  const auto truth = gen_test_function({TestFunctionName::HeaviSine}, 512);
  Rng rng(6);
  const auto noisy = add_noise(truth, 3.0, rng);
  for (auto kind : {TransformKind::DWT, TransformKind::MODWT}) {
    auto c = quick(kind, Method::SoftThreshold, 5);
    const auto plain = denoise(noisy.values, c);
    c.align = true;
    const auto aligned = denoise(noisy.values, c);
    CHECK((plain.estimate - aligned.estimate).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("degenerate and invalid inputs") {
  const VectorXd constant = VectorXd::Constant(64, 3.0);
  auto c = quick(TransformKind::DWT, Method::HardThreshold, 3);
  CHECK_THROWS_WITH_AS(denoise(constant, c), doctest::Contains("median absolute deviation"), std::invalid_argument);
  // With the noise level supplied, a constant signal is reproduced exactly
  // by thresholding and up to Monte Carlo noise by the caravan mean.
  c.sigma_override = 0.5;
  CHECK((denoise(constant, c).estimate - constant).cwiseAbs().maxCoeff() < 1e-12);
  c.method = Method::CaravanMean;
  CHECK((denoise(constant, c).estimate - constant).cwiseAbs().maxCoeff() < 5e-2);
  c = quick(TransformKind::DWT, Method::HardThreshold, 6);
  CHECK_THROWS_WITH_AS(denoise(VectorXd::Ones(1000), c), doctest::Contains("2^J0"), std::invalid_argument);
  VectorXd bad = VectorXd::Ones(64);
  bad(3) = NAN;
  CHECK_THROWS_AS(denoise(bad, quick(TransformKind::MODWT, Method::HardThreshold, 2)), std::invalid_argument);
}

TEST_CASE("peak height") {
  CHECK(peak_height(vec({1.0, 58.02, 3.0})) == 58.02);
  CHECK_THROWS_AS(peak_height(VectorXd()), std::invalid_argument);
}
