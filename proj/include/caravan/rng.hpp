#pragma once

#include <cstdint>
#include <random>

namespace caravan {

/// Mixes a master seed with stream identifiers (level, replicate, ...) into
/// an independent 64-bit seed. Order of the identifiers matters.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Per-chain random source. Never shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Gamma(shape, rate).
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  /// Inverse gamma IG(shape, scale), drawn as 1 / Gamma(shape, scale).
  double inverse_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace caravan
