#pragma once

#include "caravan/denoise.hpp"
#include "caravan/rng.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caravan {

enum class TestFunctionName { Bumps, Blocks, Doppler, HeaviSine };

/// HeaviSine is 4 sin(pi t) - sgn(t - 0.3) - sgn(0.72 - t) by default;
/// `canonical_heavisine` switches to the 4 sin(4 pi t) form.
struct TestFunction {
  TestFunctionName name = TestFunctionName::Bumps;
  bool canonical_heavisine = false;

  /// "bumps", "blocks", "doppler", "heavisine", "heavisine-canonical".
  std::string label() const;
  /// Short column tag used in the tables ("bmp", "blk", "dpl", "hvs").
  std::string_view short_label() const;
  bool operator<(const TestFunction& other) const;
  bool operator==(const TestFunction& other) const = default;
};

TestFunction parse_test_function(std::string_view text);

/// Raw (unscaled) test function at t in [0, 1].
double evaluate_test_function(const TestFunction& f, double t);

/// Samples at t_i = i/N, i = 1..N, rescaled to sample standard deviation 1.
Eigen::VectorXd gen_test_function(const TestFunction& f, Eigen::Index n);

/// Sample standard deviation (n - 1 denominator).
double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& x);

struct NoisyData {
  Eigen::VectorXd values;
  double sigma = 0.0;
};

/// Adds N(0, sigma^2) noise with sigma = SD(signal) / snr.
NoisyData add_noise(const Eigen::Ref<const Eigen::VectorXd>& signal, double snr, Rng& rng);

double squared_error(const Eigen::Ref<const Eigen::VectorXd>& estimate, const Eigen::Ref<const Eigen::VectorXd>& truth);

struct BenchSpec {
  std::vector<TestFunction> functions;
  Eigen::Index n = 512;
  std::vector<double> snr_values = {7.0, 3.0};
  int replicates = 20;
  std::vector<DenoiseConfig> configs;
  /// Chain length overrides per function (e.g. longer chains for Blocks).
  std::map<TestFunctionName, int> iterations_override;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct CellKey {
  std::string function;
  double snr = 0.0;
  TransformKind transform = TransformKind::DWT;
  FilterName filter = FilterName::LA8;
  int levels = 0;
  Method method = Method::CaravanMean;

  bool operator<(const CellKey& other) const;
};

struct CellStats {
  double mean_sq_error = 0.0;
  double sd_sq_error = 0.0;
  int replicates = 0;
};

struct ReplicateRecord {
  CellKey key;
  int replicate = 0;
  double sq_error = 0.0;
};

struct BenchResult {
  std::map<CellKey, CellStats> cells;
  std::vector<ReplicateRecord> records;  // sorted by (cell, replicate)
};

/// Estimates for one noisy dataset under one config. The default runner
/// calls denoise(); tests substitute their own.
using MethodRunner =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& noisy, const Eigen::VectorXd& truth, const DenoiseConfig&)>;

BenchResult run_benchmark(const BenchSpec& spec);
BenchResult run_benchmark(const BenchSpec& spec, const MethodRunner& runner);

/// Mean and sample SD per cell recomputed from the replicate records.
std::map<CellKey, CellStats> aggregate(const std::vector<ReplicateRecord>& records);

std::string results_csv(const BenchResult& result);
std::string replicates_csv(const BenchResult& result);

/// Method-by-function text layout; published numbers for the matching
/// configuration are printed alongside, labelled as such.
std::string render_table(const BenchResult& result, Eigen::Index n);

/// Published average squared errors, keyed by method row label and column
/// ("bmp-low", "dpl-high", ...). Empty if the configuration has no table.
struct PublishedTable {
  std::string title;
  std::map<std::string, std::map<std::string, double>> rows;
};
std::optional<PublishedTable> published_table(TransformKind kind, Eigen::Index n, int levels);


}  // namespace caravan
