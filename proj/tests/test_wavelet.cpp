#include "caravan/wavelet.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

using namespace caravan;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using oracle::dwt_matrix;
using oracle::random_signal;
using oracle::stack;

namespace {

const FilterName kFilters[] = {FilterName::Haar, FilterName::D4, FilterName::LA8};

VectorXd upsample(const VectorXd& f, int level) {
  const Eigen::Index step = Eigen::Index{1} << (level - 1);
  VectorXd out = VectorXd::Zero((f.size() - 1) * step + 1);
  for (Eigen::Index l = 0; l < f.size(); ++l) out(l * step) = f(l);
  return out;
}

VectorXd convolve(const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i + k) += a(i) * b(k);
  return out;
}

// Level-j MODWT equivalent filter, composed directly from the rescaled
// unit-level filters.
VectorXd equivalent_filter(const QmfFilter<double>& f, int level, Band band) {
  const VectorXd g = f.lowpass / std::sqrt(2.0);
  const VectorXd h = f.highpass / std::sqrt(2.0);
  VectorXd out = VectorXd::Ones(1);
  for (int k = 1; k < level; ++k) out = convolve(out, upsample(g, k));
  return convolve(out, upsample(band == Band::Wavelet ? h : g, level));
}

// Energy of the imaginary part of the transfer function after advancing the
// filter by `shift`; zero for an exactly zero-phase result.
double phase_residual(const VectorXd& filter, long shift) {
  constexpr int kFreqs = 1024;
  double cost = 0.0;
  for (int k = 0; k < kFreqs; ++k) {
    const double f = static_cast<double>(k) / kFreqs;
    std::complex<double> h = 0.0;
    for (Eigen::Index l = 0; l < filter.size(); ++l)
      h += filter(l) * std::polar(1.0, -2.0 * M_PI * f * static_cast<double>(l - shift));
    cost += h.imag() * h.imag();
  }
  return cost;
}

long phase_optimal_shift(const VectorXd& filter) {
  long best = 0;
  double best_cost = INFINITY;
  for (long s = 0; s < filter.size(); ++s) {
    const double c = phase_residual(filter, s);
    if (c < best_cost) best_cost = c, best = s;
  }
  return best;
}

}  // namespace

TEST_CASE("filters satisfy the quadrature-mirror identities") {
  for (auto name : kFilters) {
    CAPTURE(to_string(name));
    const auto f = make_filter<double>(name);
    const Eigen::Index L = f.length();
    CHECK(L % 2 == 0);
    CHECK(f.lowpass.sum() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(f.highpass.sum()) < 1e-12);
    CHECK(std::abs(f.lowpass.squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(f.highpass.squaredNorm() - 1.0) < 1e-12);
    for (Eigen::Index m = 1; 2 * m < L; ++m) {
      double hh = 0.0, gg = 0.0, hg = 0.0;
      for (Eigen::Index k = 0; k + 2 * m < L; ++k) {
        hh += f.lowpass(k) * f.lowpass(k + 2 * m);
        gg += f.highpass(k) * f.highpass(k + 2 * m);
      }
      for (Eigen::Index k = 0; k < L; ++k) hg += f.lowpass(k) * f.highpass(k);
      CHECK(std::abs(hh) < 1e-12);
      CHECK(std::abs(gg) < 1e-12);
      CHECK(std::abs(hg) < 1e-12);
    }
    for (Eigen::Index k = 0; k < L; ++k)
      CHECK(f.highpass(k) == doctest::Approx((k % 2 ? -1.0 : 1.0) * f.lowpass(L - 1 - k)).epsilon(1e-15));
  }
}

TEST_CASE("Haar pair") {
  const auto f = make_filter<double>(FilterName::Haar);
  const double c = 1.0 / std::sqrt(2.0);
  CHECK(f.lowpass(0) == doctest::Approx(c));
  CHECK(f.lowpass(1) == doctest::Approx(c));
  CHECK(f.highpass(0) == doctest::Approx(c));
  CHECK(f.highpass(1) == doctest::Approx(-c));
}

TEST_CASE("LA8 matches the published least-asymmetric table and has four vanishing moments") {
  // Daubechies (1992) / Percival & Walden (2000) LA(8) scaling coefficients.
  const double published[8] = {-0.0757657147893407, -0.0296355276459541, 0.4976186676324578, 0.8037387518052163,
                               0.2978577956055422,  -0.0992195435769354, -0.0126039672622612, 0.0322231006040713};
  const auto f = make_filter<double>(FilterName::LA8);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(f.lowpass(k) - published[k]) < 1e-12);
  for (int p = 0; p <= 3; ++p) {
    double moment = 0.0;
    for (int k = 0; k < 8; ++k) moment += std::pow(static_cast<double>(k), p) * f.highpass(k);
    CHECK(std::abs(moment) < 1e-8);
  }
  // D4 has two vanishing moments, Haar one.
  const auto d4 = make_filter<double>(FilterName::D4);
  double m1 = 0.0;
  for (int k = 0; k < 4; ++k) m1 += k * d4.highpass(k);
  CHECK(std::abs(m1) < 1e-12);
}

TEST_CASE("unsupported filters and names are rejected") {
  CHECK_THROWS_AS(make_filter<double>(static_cast<FilterName>(42)), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_filter_name("db20"), doctest::Contains("db20"), std::invalid_argument);
  CHECK(parse_filter_name("LA8") == FilterName::LA8);
  CHECK(parse_transform_kind("MODWT") == TransformKind::MODWT);
}

TEST_CASE("DWT equals the explicit filter-and-decimate matrix for N <= 32") {
  std::mt19937_64 gen(11);
  for (auto name : kFilters) {
    const auto f = make_filter<double>(name);
    for (Eigen::Index n : {2, 4, 8, 16, 32}) {
      for (int levels = 1; (Eigen::Index{1} << levels) <= n; ++levels) {
        CAPTURE(to_string(name));
        CAPTURE(n);
        CAPTURE(levels);
        const MatrixXd W = dwt_matrix(f, n, levels);
        CHECK((W * W.transpose() - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        const VectorXd x = random_signal(n, gen);
        const auto d = dwt_forward(x, f, levels);
        CHECK((stack(d) - W * x).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((dwt_inverse(d) - W.transpose() * stack(d)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("DWT preserves energy and inverts exactly on random signals") {
  std::mt19937_64 gen(12);
  for (auto name : kFilters) {
    const auto f = make_filter<double>(name);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 64 * (1 + trial % 8);
      const int levels = 1 + trial % 6;
      const VectorXd x = random_signal(n, gen);
      const auto d = dwt_forward(x, f, levels);
      CHECK(d.coefficient_count() == n);
      CHECK(d.wavelet[0].size() == n / 2);
      CHECK(std::abs(stack(d).squaredNorm() - x.squaredNorm()) < 1e-10);
      CHECK((dwt_inverse(d) - x).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("DWT length constraints") {
  const auto f = make_filter<double>(FilterName::LA8);
  const VectorXd x = VectorXd::Ones(1000);
  CHECK_THROWS_WITH_AS(dwt_forward(x, f, 6), doctest::Contains("multiple of 2^J0"), std::invalid_argument);
  CHECK_THROWS_AS(dwt_forward(x, f, 0), std::invalid_argument);
  CHECK_NOTHROW(dwt_forward(x, f, 3));
  CHECK_THROWS_AS(modwt_forward(x, f, 0), std::invalid_argument);
}

TEST_CASE("MODWT preserves energy, inverts exactly and accepts any length") {
  std::mt19937_64 gen(13);
  for (auto name : kFilters) {
    const auto f = make_filter<double>(name);
    for (Eigen::Index n : {7, 100, 256, 1000}) {
      const VectorXd x = random_signal(n, gen);
      const auto d = modwt_forward(x, f, 4);
      for (const auto& w : d.wavelet) CHECK(w.size() == n);
      CHECK(d.scaling.size() == n);
      double energy = d.scaling.squaredNorm();
      for (const auto& w : d.wavelet) energy += w.squaredNorm();
      CHECK(std::abs(energy - x.squaredNorm()) < 1e-10 * x.squaredNorm());
      CHECK((modwt_inverse(d) - x).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("constant input has no detail") {
  for (auto name : kFilters) {
    const auto f = make_filter<double>(name);
    const VectorXd x = VectorXd::Constant(96, 2.5);
    const auto d = dwt_forward(x, f, 5);
    for (const auto& w : d.wavelet) CHECK(w.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((d.scaling.array() - 2.5 * std::pow(2.0, 2.5)).abs().maxCoeff() < 1e-12);
    const auto m = modwt_forward(x, f, 5);
    for (const auto& w : m.wavelet) CHECK(w.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m.scaling.array() - 2.5).abs().maxCoeff() < 1e-12);
    const auto parts = mra(d);
    for (const auto& dj : parts.details) CHECK(dj.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((parts.smooth.array() - 2.5).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("LA8 level-1 coefficients vanish on a cubic away from the wrap") {
  const auto f = make_filter<double>(FilterName::LA8);
  VectorXd x(64);
  for (Eigen::Index t = 0; t < 64; ++t) {
    const double u = static_cast<double>(t) / 64.0;
    x(t) = 1.0 - 2.0 * u + 3.0 * u * u - 0.5 * u * u * u;
  }
  const auto d = dwt_forward(x, f, 1);
  // W_{1,t} touches x_{2t+1-7..2t+1}; interior coefficients avoid the wrap.
  for (Eigen::Index t = 3; t < 32; ++t) CHECK(std::abs(d.wavelet[0](t)) < 1e-8);
}

TEST_CASE("MODWT subsampled and rescaled equals the DWT") {
  std::mt19937_64 gen(14);
  for (auto name : {FilterName::Haar, FilterName::LA8}) {
    const auto f = make_filter<double>(name);
    const Eigen::Index n = 128;
    const int levels = 5;
    const VectorXd x = random_signal(n, gen);
    const auto dwt = dwt_forward(x, f, levels);
    const auto modwt = modwt_forward(x, f, levels);
    for (int j = 1; j <= levels; ++j) {
      const double scale = std::pow(2.0, 0.5 * j);
      const Eigen::Index step = Eigen::Index{1} << j;
      for (Eigen::Index t = 0; t < dwt.wavelet[j - 1].size(); ++t)
        CHECK(std::abs(dwt.wavelet[j - 1](t) - scale * modwt.wavelet[j - 1](step * (t + 1) - 1)) < 1e-12);
    }
    const double scale = std::pow(2.0, 0.5 * levels);
    const Eigen::Index step = Eigen::Index{1} << levels;
    for (Eigen::Index t = 0; t < dwt.scaling.size(); ++t)
      CHECK(std::abs(dwt.scaling(t) - scale * modwt.scaling(step * (t + 1) - 1)) < 1e-12);
  }
}

TEST_CASE("MODWT matches the composed equivalent filters") {
  const auto f = make_filter<double>(FilterName::LA8);
  const Eigen::Index n = 512;
  VectorXd impulse = VectorXd::Zero(n);
  impulse(0) = 1.0;
  const auto d = modwt_forward(impulse, f, 4);
  for (int j = 1; j <= 4; ++j) {
    const VectorXd h = equivalent_filter(f, j, Band::Wavelet);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double expected = t < h.size() ? h(t) : 0.0;
      CHECK(std::abs(d.wavelet[j - 1](t) - expected) < 1e-14);
    }
  }
  const VectorXd g = equivalent_filter(f, 4, Band::Scaling);
  for (Eigen::Index t = 0; t < g.size(); ++t) CHECK(std::abs(d.scaling(t) - g(t)) < 1e-14);
}

TEST_CASE("MRA details and smooth add back to the input") {
  std::mt19937_64 gen(15);
  for (auto name : kFilters) {
    const auto f = make_filter<double>(name);
    for (auto kind : {TransformKind::DWT, TransformKind::MODWT}) {
      const VectorXd x = random_signal(256, gen);
      const auto d = forward(kind, x, f, 5);
      const auto m = mra(d);
      CHECK(m.details.size() == 5);
      for (const auto& dj : m.details) CHECK(dj.size() == 256);
      CHECK((m.sum() - x).cwiseAbs().maxCoeff() < 1e-10);
      // An aligned decomposition yields the same components.
      const auto aligned = mra(align(d));
      for (int j = 0; j < 5; ++j) CHECK((aligned.details[j] - m.details[j]).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("LA8 zero-phase shifts") {
  const auto f = make_filter<double>(FilterName::LA8);
  // Frozen closed-form advances for levels 1..4.
  const long wavelet[] = {4, 11, 25, 53};
  const long scaling[] = {3, 9, 21, 45};
  for (int j = 1; j <= 4; ++j) {
    CAPTURE(j);
    CHECK(alignment_shift(f, TransformKind::MODWT, j, Band::Wavelet, 4096) == wavelet[j - 1]);
    CHECK(alignment_shift(f, TransformKind::MODWT, j, Band::Scaling, 4096) == scaling[j - 1]);

    // The phase-optimal shift of the equivalent filter agrees exactly at
    // the finest levels and within two samples further down.
    for (auto band : {Band::Wavelet, Band::Scaling}) {
      const VectorXd h = equivalent_filter(f, j, band);
      const long shift = alignment_shift(f, TransformKind::MODWT, j, band, 4096);
      const long best = phase_optimal_shift(h);
      if (j <= 2) {
        CHECK(shift == best);
      } else {
        CHECK(std::labs(shift - best) <= 2);
      }
      // Advanced by the closed-form shift, most of the transfer function is real.
      const double total = 1024 * h.squaredNorm();
      CHECK(phase_residual(h, shift) < 0.2 * total);
    }
  }
}

TEST_CASE("DWT alignment places an isolated spike at its time index") {
  const auto f = make_filter<double>(FilterName::LA8);
  const Eigen::Index n = 1024;
  for (Eigen::Index t0 : {200, 517, 800}) {
    VectorXd x = VectorXd::Zero(n);
    x(t0) = 1.0;
    const auto d = align(dwt_forward(x, f, 4));
    for (int j = 1; j <= 4; ++j) {
      Eigen::Index at = 0;
      d.wavelet[j - 1].cwiseAbs().maxCoeff(&at);
      CAPTURE(t0);
      CAPTURE(j);
      CHECK(std::abs(static_cast<double>(at) - static_cast<double>(t0) / (1 << j)) <= 1.5);
    }
  }
}

TEST_CASE("align and unalign are inverse relabellings") {
  std::mt19937_64 gen(16);
  for (auto kind : {TransformKind::DWT, TransformKind::MODWT}) {
    const auto f = make_filter<double>(FilterName::LA8);
    const VectorXd x = random_signal(256, gen);
    const auto d = forward(kind, x, f, 4);
    const auto a = align(d);
    CHECK(a.aligned);
    CHECK_THROWS_AS(align(a), std::invalid_argument);
    CHECK_THROWS_AS(unalign(d), std::invalid_argument);
    CHECK_THROWS_AS(inverse(a), std::invalid_argument);
    const auto back = unalign(a);
    CHECK(!back.aligned);
    for (int j = 0; j < 4; ++j) CHECK(back.wavelet[j] == d.wavelet[j]);
    CHECK(back.scaling == d.scaling);
    // A pure relabelling: the multiset of coefficients is unchanged.
    for (int j = 0; j < 4; ++j) CHECK(a.wavelet[j].squaredNorm() == doctest::Approx(d.wavelet[j].squaredNorm()));
  }
}

TEST_CASE("transforms are generic over the scalar type") {
  const auto f = make_filter<float>(FilterName::LA8);
  Eigen::VectorXf x = Eigen::VectorXf::LinSpaced(64, -1.0f, 1.0f);
  const auto d = dwt_forward(x, f, 3);
  CHECK((dwt_inverse(d) - x).cwiseAbs().maxCoeff() < 1e-5f);
  const auto fl = make_filter<long double>(FilterName::LA8);
  CHECK(std::abs(static_cast<double>(fl.lowpass.sum()) - std::sqrt(2.0)) < 1e-15);
}
