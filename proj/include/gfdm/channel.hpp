#pragma once

// Multipath Rayleigh channel: exponential power delay profiles, seeded tap
// draws and the circular (CP-absorbed) channel with AWGN.

#include <gfdm/numerics.hpp>

#include <cmath>
#include <numeric>
#include <concepts>
#include <random>
#include <string>
#include <vector>

namespace gfdm {

/// Per-tap average powers, normalized to unit sum. N taps, channel order N-1.
struct PowerDelayProfile {
  std::vector<double> p;

  Index taps() const { return static_cast<Index>(p.size()); }

  Eigen::VectorXd as_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Index>(p.size()));
  }

  /// Sigma_hh = diag(p).
  ComplexMatrix covariance() const { return as_vector().cast<cdouble>().asDiagonal(); }
};

struct ChannelRealization {
  ComplexVector h;

  Index taps() const { return h.size(); }
};

/// Noise variance N0 per complex sample.
struct NoiseSpec {
  double n0 = 0.0;

  /// N0 = Es * 10^(-snr_db/10).
  static NoiseSpec from_snr_db(double snr_db, double es = 1.0) {
    return {es * std::pow(10.0, -snr_db / 10.0)};
  }
};

/// Circularly-symmetric complex Gaussian sample with unit variance.
template <std::uniform_random_bit_generator Rng> cdouble complex_normal(Rng &rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

template <std::uniform_random_bit_generator Rng> ComplexVector complex_normal_vector(Index n, Rng &rng) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = complex_normal(rng);
  return v;
}

namespace channel {

/// Taps fall log-linearly from 0 dB to -10 dB, then the profile is normalized.
inline PowerDelayProfile exponential_pdp(Index n) {
  if (n < 1)
    throw InvalidParameter("exponential_pdp: need at least one tap");
  PowerDelayProfile pdp;
  pdp.p.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    pdp.p[static_cast<std::size_t>(i)] =
        n == 1 ? 1.0 : std::pow(10.0, -static_cast<double>(i) / static_cast<double>(n - 1));
  const double total = std::accumulate(pdp.p.begin(), pdp.p.end(), 0.0);
  for (double &v : pdp.p)
    v /= total;
  return pdp;
}

/// h = sqrt(diag(p)) q for a given q.
inline ChannelRealization draw_channel(const PowerDelayProfile &pdp, const ComplexVector &q) {
  if (q.size() != pdp.taps())
    throw InvalidDimension("draw_channel: q length must equal tap count");
  return {pdp.as_vector().cwiseSqrt().cast<cdouble>().cwiseProduct(q)};
}

template <std::uniform_random_bit_generator Rng> ChannelRealization draw_channel(const PowerDelayProfile &pdp, Rng &rng) {
  return draw_channel(pdp, complex_normal_vector(pdp.taps(), rng));
}

/// H x with H the D x D circulant of the zero-padded taps.
inline ComplexVector circular_convolve(const ComplexVector &h, const ComplexVector &x) {
  const Index d = x.size();
  if (h.size() > d)
    throw InvalidDimension("apply_channel: more taps (" + std::to_string(h.size()) +
                           ") than block samples (" + std::to_string(d) + ")");
  ComplexVector y = ComplexVector::Zero(d);
  for (Index i = 0; i < h.size(); ++i) {
    const cdouble t = h(i);
    for (Index n = 0; n < d; ++n)
      y((n + i) % d) += t * x(n);
  }
  return y;
}

/// Full linear convolution, length |s| + |h| - 1.
inline ComplexVector linear_convolve(const ComplexVector &h, const ComplexVector &s) {
  if (h.size() == 0 || s.size() == 0)
    return ComplexVector();
  ComplexVector y = ComplexVector::Zero(s.size() + h.size() - 1);
  for (Index i = 0; i < h.size(); ++i)
    for (Index n = 0; n < s.size(); ++n)
      y(n + i) += h(i) * s(n);
  return y;
}

/// y = H x + sqrt(N0) * w_unit for a pre-drawn unit-variance noise vector.
inline ComplexVector apply_channel(const ChannelRealization &ch, const ComplexVector &x,
                                   double n0, const ComplexVector &unit_noise) {
  if (unit_noise.size() != x.size())
    throw InvalidDimension("apply_channel: noise length mismatch");
  ComplexVector y = circular_convolve(ch.h, x);
  if (n0 > 0.0)
    y += std::sqrt(n0) * unit_noise;
  return y;
}

/// y = H x + w, w ~ CN(0, N0 I).
template <std::uniform_random_bit_generator Rng>
ComplexVector apply_channel(const ChannelRealization &ch, const ComplexVector &x,
                            const NoiseSpec &noise, Rng &rng) {
  if (noise.n0 < 0.0)
    throw InvalidParameter("apply_channel: negative noise variance");
  ComplexVector y = circular_convolve(ch.h, x);
  if (noise.n0 > 0.0)
    y += std::sqrt(noise.n0) * complex_normal_vector(x.size(), rng);
  return y;
}

/// F_N h: channel frequency response on the D DFT bins.
inline ComplexVector frequency_response(const ComplexVector &h, Index d) {
  if (h.size() > d)
    throw InvalidDimension("frequency_response: more taps than bins");
  ComplexVector padded = ComplexVector::Zero(d);
  padded.head(h.size()) = h;
  return numerics::dft(padded) * std::sqrt(static_cast<double>(d));
}

} // namespace channel
} // namespace gfdm
