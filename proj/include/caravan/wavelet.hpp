#pragma once

// Periodic-boundary DWT and MODWT via the pyramid algorithm, with
// multiresolution analysis and zero-phase alignment.
//
// Conventions (Percival & Walden style):
//   lowpass  = scaling filter {g_l}
//   highpass = wavelet filter {h_l},  h_l = (-1)^l g_{L-1-l}
//   DWT step:   W_t = sum_l h_l V_{(2t+1-l) mod M}   (odd decimation)
//   MODWT step: W~_t = sum_l h~_l V~_{(t - 2^{j-1} l) mod N},  h~ = h / sqrt(2)
// With these, W_{j,t} = 2^{j/2} W~_{j, 2^j (t+1) - 1} on dyadic inputs.

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace caravan {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class FilterName { Haar, D4, LA8 };
enum class TransformKind { DWT, MODWT };
enum class Band { Wavelet, Scaling };

std::string_view to_string(FilterName name);
std::string_view to_string(TransformKind kind);
FilterName parse_filter_name(std::string_view text);
TransformKind parse_transform_kind(std::string_view text);

template <typename Scalar = double>
struct QmfFilter {
  FilterName name;
  Vector<Scalar> lowpass;
  Vector<Scalar> highpass;

  Eigen::Index length() const { return lowpass.size(); }

  /// Zero-phase advance of the level-1 scaling filter (a non-positive
  /// integer). The level-j advances follow from it, see phase_advance().
  int base_phase() const {
    switch (name) {
      case FilterName::Haar: return 0;
      case FilterName::D4: return -1;
      case FilterName::LA8: return -3;
    }
    throw std::invalid_argument("unsupported filter");
  }
};

namespace detail {

// Least-asymmetric 8-tap scaling filter, 4 vanishing moments. Obtained by
// spectral factorisation of the Daubechies polynomial in 40-digit arithmetic.
inline constexpr long double kLa8[8] = {
    -0.075765714789502213228L, -0.029635527646002491764L,
    0.49761866763277498998L,   0.80373875180513208088L,
    0.2978577956053060514L,    -0.099219543576633532585L,
    -0.012603967262031303754L, 0.032223100604051467872L};

inline Eigen::Index wrap(Eigen::Index i, Eigen::Index m) {
  const Eigen::Index r = i % m;
  return r < 0 ? r + m : r;
}

}  // namespace detail

template <typename Scalar = double>
QmfFilter<Scalar> make_filter(FilterName name) {
  using std::sqrt;
  std::vector<long double> g;
  switch (name) {
    case FilterName::Haar: {
      const long double c = 1.0L / std::sqrt(2.0L);
      g = {c, c};
      break;
    }
    case FilterName::D4: {
      const long double s3 = std::sqrt(3.0L);
      const long double d = 4.0L * std::sqrt(2.0L);
      g = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
      break;
    }
    case FilterName::LA8:
      g.assign(std::begin(detail::kLa8), std::end(detail::kLa8));
      break;
    default:
      throw std::invalid_argument("unsupported filter name (expected haar, d4 or la8)");
  }
  const auto L = static_cast<Eigen::Index>(g.size());
  QmfFilter<Scalar> f{name, Vector<Scalar>(L), Vector<Scalar>(L)};
  for (Eigen::Index k = 0; k < L; ++k) {
    f.lowpass(k) = static_cast<Scalar>(g[k]);
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    f.highpass(k) = static_cast<Scalar>(sign * g[L - 1 - k]);
  }
  return f;
}

/// Signed zero-phase advance of the level-j equivalent filter.
template <typename Scalar>
long phase_advance(const QmfFilter<Scalar>& filter, int level, Band band) {
  const long nu = filter.base_phase();
  const long L = static_cast<long>(filter.length());
  if (band == Band::Scaling) return ((1L << level) - 1) * nu;
  return -((1L << (level - 1)) * (L - 1) + nu);
}

/// Non-negative circular advance that aligns a level's coefficients with
/// the time axis of the input: aligned[t] = coef[(t + shift) mod size].
template <typename Scalar>
Eigen::Index alignment_shift(const QmfFilter<Scalar>& filter, TransformKind kind,
                             int level, Band band, Eigen::Index size) {
  const long nu = std::labs(phase_advance(filter, level, band));
  if (kind == TransformKind::MODWT) return detail::wrap(nu, size);
  return detail::wrap((nu + 1) >> level, size);
}

template <typename Scalar = double>
struct WaveletDecomposition {
  TransformKind kind = TransformKind::DWT;
  QmfFilter<Scalar> filter;
  std::vector<Vector<Scalar>> wavelet;  // w_1 .. w_J0, finest first
  Vector<Scalar> scaling;               // v_J0
  Eigen::Index original_length = 0;
  bool aligned = false;

  int levels() const { return static_cast<int>(wavelet.size()); }

  Eigen::Index coefficient_count() const {
    Eigen::Index n = scaling.size();
    for (const auto& w : wavelet) n += w.size();
    return n;
  }

  /// Throws if level lengths do not match the transform kind and depth.
  void validate() const {
    if (wavelet.empty()) throw std::invalid_argument("decomposition has no levels");
    const Eigen::Index N = original_length;
    for (int j = 1; j <= levels(); ++j) {
      const Eigen::Index expected = kind == TransformKind::DWT ? (N >> j) : N;
      if (wavelet[j - 1].size() != expected || expected == 0) {
        throw std::invalid_argument("inconsistent coefficient length at level " + std::to_string(j));
      }
    }
    const Eigen::Index expected = kind == TransformKind::DWT ? (N >> levels()) : N;
    if (scaling.size() != expected) throw std::invalid_argument("inconsistent scaling coefficient length");
    if (kind == TransformKind::DWT && (N % (Eigen::Index{1} << levels())) != 0) {
      throw std::invalid_argument("DWT length is not a multiple of 2^levels");
    }
  }
};

template <typename Scalar = double>
struct MraDecomposition {
  std::vector<Vector<Scalar>> details;  // D_1 .. D_J0
  Vector<Scalar> smooth;                // S_J0

  Vector<Scalar> sum() const {
    Vector<Scalar> out = smooth;
    for (const auto& d : details) out += d;
    return out;
  }
};

namespace detail {

template <typename Scalar>
void dwt_step(const Vector<Scalar>& v, const QmfFilter<Scalar>& f, Vector<Scalar>& w_out,
              Vector<Scalar>& v_out) {
  const Eigen::Index M = v.size();
  const Eigen::Index half = M / 2;
  const Eigen::Index L = f.length();
  w_out.setZero(half);
  v_out.setZero(half);
  for (Eigen::Index t = 0; t < half; ++t) {
    Scalar ws(0), vs(0);
    for (Eigen::Index l = 0; l < L; ++l) {
      const Scalar x = v(wrap(2 * t + 1 - l, M));
      ws += f.highpass(l) * x;
      vs += f.lowpass(l) * x;
    }
    w_out(t) = ws;
    v_out(t) = vs;
  }
}

template <typename Scalar>
Vector<Scalar> idwt_step(const Vector<Scalar>& w, const Vector<Scalar>& v, const QmfFilter<Scalar>& f) {
  const Eigen::Index half = w.size();
  const Eigen::Index M = 2 * half;
  const Eigen::Index L = f.length();
  Vector<Scalar> out = Vector<Scalar>::Zero(M);
  for (Eigen::Index t = 0; t < half; ++t) {
    for (Eigen::Index l = 0; l < L; ++l) {
      out(wrap(2 * t + 1 - l, M)) += f.highpass(l) * w(t) + f.lowpass(l) * v(t);
    }
  }
  return out;
}

template <typename Scalar>
void modwt_step(const Vector<Scalar>& v, const QmfFilter<Scalar>& f, int level, Vector<Scalar>& w_out,
                Vector<Scalar>& v_out) {
  using std::sqrt;
  const Eigen::Index N = v.size();
  const Eigen::Index L = f.length();
  const Eigen::Index stride = wrap(Eigen::Index{1} << (level - 1), N);
  const Scalar scale = Scalar(1) / sqrt(Scalar(2));
  w_out.setZero(N);
  v_out.setZero(N);
  for (Eigen::Index t = 0; t < N; ++t) {
    Scalar ws(0), vs(0);
    Eigen::Index k = t;
    for (Eigen::Index l = 0; l < L; ++l) {
      ws += f.highpass(l) * v(k);
      vs += f.lowpass(l) * v(k);
      k = wrap(k - stride, N);
    }
    w_out(t) = ws * scale;
    v_out(t) = vs * scale;
  }
}

template <typename Scalar>
Vector<Scalar> imodwt_step(const Vector<Scalar>& w, const Vector<Scalar>& v, const QmfFilter<Scalar>& f,
                           int level) {
  using std::sqrt;
  const Eigen::Index N = v.size();
  const Eigen::Index L = f.length();
  const Eigen::Index stride = wrap(Eigen::Index{1} << (level - 1), N);
  const Scalar scale = Scalar(1) / sqrt(Scalar(2));
  Vector<Scalar> out(N);
  for (Eigen::Index t = 0; t < N; ++t) {
    Scalar s(0);
    Eigen::Index k = t;
    for (Eigen::Index l = 0; l < L; ++l) {
      s += f.highpass(l) * w(k) + f.lowpass(l) * v(k);
      k = wrap(k + stride, N);
    }
    out(t) = s * scale;
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> circular_advance(const Vector<Scalar>& x, Eigen::Index shift) {
  const Eigen::Index n = x.size();
  Vector<Scalar> out(n);
  for (Eigen::Index t = 0; t < n; ++t) out(t) = x(wrap(t + shift, n));
  return out;
}

}  // namespace detail

/// Partial DWT to depth `levels`. Requires size a multiple of 2^levels.
template <typename Derived>
WaveletDecomposition<typename Derived::Scalar> dwt_forward(const Eigen::MatrixBase<Derived>& x,
                                                           const QmfFilter<typename Derived::Scalar>& filter,
                                                           int levels) {
  using Scalar = typename Derived::Scalar;
  if (levels < 1) throw std::invalid_argument("DWT needs at least one level (J0 >= 1)");
  const Eigen::Index N = x.size();
  if (levels >= 63 || N == 0 || N % (Eigen::Index{1} << levels) != 0) {
    throw std::invalid_argument("DWT length " + std::to_string(N) + " is not a multiple of 2^J0 = 2^" +
                                std::to_string(levels));
  }
  WaveletDecomposition<Scalar> d;
  d.kind = TransformKind::DWT;
  d.filter = filter;
  d.original_length = N;
  d.wavelet.resize(levels);
  Vector<Scalar> v = x;
  Vector<Scalar> next;
  for (int j = 0; j < levels; ++j) {
    detail::dwt_step(v, filter, d.wavelet[j], next);
    v.swap(next);
  }
  d.scaling = std::move(v);
  return d;
}

template <typename Scalar>
Vector<Scalar> dwt_inverse(const WaveletDecomposition<Scalar>& d) {
  if (d.kind != TransformKind::DWT) throw std::invalid_argument("dwt_inverse needs a DWT decomposition");
  if (d.aligned) throw std::invalid_argument("cannot invert aligned coefficients; unalign first");
  d.validate();
  Vector<Scalar> v = d.scaling;
  for (int j = d.levels(); j >= 1; --j) v = detail::idwt_step(d.wavelet[j - 1], v, d.filter);
  return v;
}

/// MODWT to depth `levels`; any positive length.
template <typename Derived>
WaveletDecomposition<typename Derived::Scalar> modwt_forward(const Eigen::MatrixBase<Derived>& x,
                                                             const QmfFilter<typename Derived::Scalar>& filter,
                                                             int levels) {
  using Scalar = typename Derived::Scalar;
  if (levels < 1 || levels >= 63) throw std::invalid_argument("MODWT needs 1 <= J0 < 63");
  if (x.size() < 1) throw std::invalid_argument("MODWT needs a non-empty input");
  WaveletDecomposition<Scalar> d;
  d.kind = TransformKind::MODWT;
  d.filter = filter;
  d.original_length = x.size();
  d.wavelet.resize(levels);
  Vector<Scalar> v = x;
  Vector<Scalar> next;
  for (int j = 1; j <= levels; ++j) {
    detail::modwt_step(v, filter, j, d.wavelet[j - 1], next);
    v.swap(next);
  }
  d.scaling = std::move(v);
  return d;
}

template <typename Scalar>
Vector<Scalar> modwt_inverse(const WaveletDecomposition<Scalar>& d) {
  if (d.kind != TransformKind::MODWT) throw std::invalid_argument("modwt_inverse needs a MODWT decomposition");
  if (d.aligned) throw std::invalid_argument("cannot invert aligned coefficients; unalign first");
  d.validate();
  Vector<Scalar> v = d.scaling;
  for (int j = d.levels(); j >= 1; --j) v = detail::imodwt_step(d.wavelet[j - 1], v, d.filter, j);
  return v;
}

template <typename Scalar>
Vector<Scalar> inverse(const WaveletDecomposition<Scalar>& d) {
  return d.kind == TransformKind::DWT ? dwt_inverse(d) : modwt_inverse(d);
}

template <typename Derived>
WaveletDecomposition<typename Derived::Scalar> forward(TransformKind kind, const Eigen::MatrixBase<Derived>& x,
                                                       const QmfFilter<typename Derived::Scalar>& filter,
                                                       int levels) {
  return kind == TransformKind::DWT ? dwt_forward(x, filter, levels) : modwt_forward(x, filter, levels);
}

/// Details D_j and smooth S_J0: each is the synthesis of one band with all
/// other bands zeroed. Works for both transform kinds.
template <typename Scalar>
MraDecomposition<Scalar> mra(const WaveletDecomposition<Scalar>& d) {
  d.validate();
  WaveletDecomposition<Scalar> blank = d;
  blank.aligned = false;
  for (auto& w : blank.wavelet) w.setZero();
  blank.scaling.setZero();

  const WaveletDecomposition<Scalar> source = d.aligned ? unalign(d) : d;
  MraDecomposition<Scalar> out;
  out.details.reserve(d.levels());
  for (int j = 0; j < d.levels(); ++j) {
    blank.wavelet[j] = source.wavelet[j];
    out.details.push_back(inverse(blank));
    blank.wavelet[j].setZero();
  }
  blank.scaling = source.scaling;
  out.smooth = inverse(blank);
  return out;
}

/// Circularly shifts every band so coefficient indices line up with events
/// in the input. Throws on an already-aligned decomposition.
template <typename Scalar>
WaveletDecomposition<Scalar> align(const WaveletDecomposition<Scalar>& d) {
  if (d.aligned) throw std::invalid_argument("decomposition is already aligned");
  d.validate();
  WaveletDecomposition<Scalar> out = d;
  for (int j = 1; j <= d.levels(); ++j) {
    auto& w = out.wavelet[j - 1];
    w = detail::circular_advance(w, alignment_shift(d.filter, d.kind, j, Band::Wavelet, w.size()));
  }
  out.scaling = detail::circular_advance(
      out.scaling, alignment_shift(d.filter, d.kind, d.levels(), Band::Scaling, out.scaling.size()));
  out.aligned = true;
  return out;
}

template <typename Scalar>
WaveletDecomposition<Scalar> unalign(const WaveletDecomposition<Scalar>& d) {
  if (!d.aligned) throw std::invalid_argument("decomposition is not aligned");
  WaveletDecomposition<Scalar> out = d;
  for (int j = 1; j <= d.levels(); ++j) {
    auto& w = out.wavelet[j - 1];
    w = detail::circular_advance(w, -alignment_shift(d.filter, d.kind, j, Band::Wavelet, w.size()));
  }
  out.scaling = detail::circular_advance(
      out.scaling, -alignment_shift(d.filter, d.kind, d.levels(), Band::Scaling, out.scaling.size()));
  out.aligned = false;
  return out;
}

}  // namespace caravan
