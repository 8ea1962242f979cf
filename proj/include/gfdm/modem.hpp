#pragma once

// GFDM block modem: prototype filters, the transmitter matrix, cyclic prefix
// handling and the zero-forcing demodulator.

#include <gfdm/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace gfdm {

enum class FilterKind { Dirichlet, RaisedCosine };

struct FilterSpec {
  FilterKind kind = FilterKind::Dirichlet;
  std::optional<double> rolloff; // raised cosine only

  static FilterSpec dirichlet() { return {FilterKind::Dirichlet, std::nullopt}; }
  static FilterSpec raised_cosine(double alpha) { return {FilterKind::RaisedCosine, alpha}; }

  void validate() const {
    if (kind == FilterKind::Dirichlet && rolloff)
      throw InvalidParameter("Dirichlet filter takes no roll-off factor");
    if (kind == FilterKind::RaisedCosine) {
      if (!rolloff)
        throw InvalidParameter("raised-cosine filter needs a roll-off factor");
      if (!(*rolloff >= 0.0 && *rolloff <= 1.0))
        throw InvalidParameter("roll-off factor must lie in [0, 1]");
    }
  }

  std::string name() const { return kind == FilterKind::Dirichlet ? "dirichlet" : "rc"; }
};

struct GfdmConfig {
  Index K = 1;
  Index M = 1;
  Index L = 0;
  std::vector<Index> active_subcarriers;
  std::vector<Index> active_subsymbols;
  FilterSpec filter;

  /// Fully occupied block with K subcarriers and M subsymbols.
  static GfdmConfig full(Index k, Index m, Index cp, FilterSpec f) {
    GfdmConfig c{k, m, cp, {}, {}, f};
    for (Index i = 0; i < k; ++i)
      c.active_subcarriers.push_back(i);
    for (Index i = 0; i < m; ++i)
      c.active_subsymbols.push_back(i);
    c.validate();
    return c;
  }

  Index D() const { return K * M; }

  void validate() const {
    if (K < 1 || M < 1)
      throw InvalidDimension("GFDM block needs K >= 1 and M >= 1");
    if (L < 0)
      throw InvalidDimension("CP length must be non-negative");
    if (active_subcarriers.empty() || active_subsymbols.empty())
      throw InvalidParameter("active subcarrier/subsymbol sets must be nonempty");
    for (Index k : active_subcarriers)
      if (k < 0 || k >= K)
        throw InvalidParameter("active subcarrier index out of range");
    for (Index m : active_subsymbols)
      if (m < 0 || m >= M)
        throw InvalidParameter("active subsymbol index out of range");
    filter.validate();
  }
};

namespace modem {

namespace detail {

// Continuous raised-cosine response at normalized frequency t (units of the
// subcarrier spacing M bins): flat up to (1-a)/2, cosine roll-off to (1+a)/2.
inline double raised_cosine_response(double t, double alpha) {
  t = std::abs(t);
  const double lo = (1.0 - alpha) / 2.0;
  const double hi = (1.0 + alpha) / 2.0;
  if (t <= lo)
    return 1.0;
  if (t > hi)
    return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi / alpha * (t - lo)));
}

} // namespace detail

/// Frequency response of the prototype filter on the D DFT bins (unnormalized).
///
/// Both filters are centered on DC. For even M the centre sits half a bin on
/// the negative side, so the Dirichlet mask covers bins [-M/2, M/2) and the
/// raised cosine is sampled symmetrically about -1/2. Sampling the raised
/// cosine that way keeps A invertible when K and M are both even.
inline ComplexVector prototype_response(const FilterSpec &spec, Index K, Index M) {
  spec.validate();
  if (K < 1 || M < 1)
    throw InvalidDimension("prototype filter needs K*M >= 1");
  const Index d = K * M;
  ComplexVector resp = ComplexVector::Zero(d);
  if (spec.kind == FilterKind::Dirichlet) {
    for (Index l = -(M / 2); l < (M + 1) / 2; ++l)
      resp(((l % d) + d) % d) += 1.0;
    return resp;
  }
  const double alpha = *spec.rolloff;
  const double centre = M % 2 == 0 ? -0.5 : 0.0;
  // periodize so K = 1 blocks (support wider than D) alias correctly
  const Index span = static_cast<Index>(std::ceil(static_cast<double>(M) * (1.0 + alpha))) + 1;
  for (Index f = -span; f <= span; ++f) {
    const double v =
        detail::raised_cosine_response((static_cast<double>(f) - centre) / static_cast<double>(M), alpha);
    if (v != 0.0)
      resp(((f % d) + d) % d) += v;
  }
  return resp;
}

/// Unit-energy time-domain prototype filter g of length D = K*M.
inline ComplexVector prototype_filter(const FilterSpec &spec, Index K, Index M) {
  ComplexVector g = numerics::idft(prototype_response(spec, K, M));
  return g / g.norm();
}

} // namespace modem

/// The D x D GFDM transmitter matrix with the prototype filter it was built from.
struct TransmitterMatrix {
  ComplexMatrix A;
  ComplexVector g;
  Index K = 1;
  Index M = 1;

  Index D() const { return A.rows(); }
};

namespace modem {

/// Column k + m*K holds g shifted circularly by m*K samples and modulated to
/// subcarrier k: A(n, k+mK) = g[<n - mK>_D] * exp(j2*pi*k*n/K).
inline TransmitterMatrix transmitter_matrix(const ComplexVector &g, Index K, Index M) {
  if (K < 1 || M < 1)
    throw InvalidDimension("transmitter_matrix: K and M must be >= 1");
  const Index d = K * M;
  if (g.size() != d)
    throw InvalidDimension("transmitter_matrix: filter length " + std::to_string(g.size()) +
                           " != K*M = " + std::to_string(d));
  std::vector<cdouble> carrier(static_cast<std::size_t>(K));
  for (Index r = 0; r < K; ++r)
    carrier[static_cast<std::size_t>(r)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(K));
  ComplexMatrix a(d, d);
  for (Index m = 0; m < M; ++m)
    for (Index k = 0; k < K; ++k) {
      const Index col = k + m * K;
      for (Index n = 0; n < d; ++n)
        a(n, col) = g(((n - m * K) % d + d) % d) * carrier[static_cast<std::size_t>((k * n) % K)];
    }
  return {std::move(a), g, K, M};
}

inline TransmitterMatrix transmitter_matrix(const GfdmConfig &cfg) {
  cfg.validate();
  return transmitter_matrix(prototype_filter(cfg.filter, cfg.K, cfg.M), cfg.K, cfg.M);
}

/// x = A d.
inline ComplexVector modulate(const TransmitterMatrix &tm, const ComplexVector &d) {
  if (d.size() != tm.D())
    throw InvalidDimension("modulate: data block length mismatch");
  return tm.A * d;
}

/// Prepends the last L samples of x.
inline ComplexVector add_cp(const ComplexVector &x, Index L) {
  if (L < 0 || L > x.size())
    throw InvalidDimension("add_cp: CP length exceeds block length");
  ComplexVector s(x.size() + L);
  s.head(L) = x.tail(L);
  s.tail(x.size()) = x;
  return s;
}

/// Drops the first L samples.
inline ComplexVector remove_cp(const ComplexVector &s, Index L) {
  if (L < 0 || L > s.size())
    throw InvalidDimension("remove_cp: CP length exceeds signal length");
  return s.tail(s.size() - L);
}

/// Zero-forcing demodulator; factors A once and reuses it for every block.
class ZfDemodulator {
public:
  explicit ZfDemodulator(const TransmitterMatrix &tm) : solver_(tm.A, "demodulate_zf") {}

  ComplexVector operator()(const ComplexVector &x_hat) const {
    if (x_hat.size() != solver_.size())
      throw InvalidDimension("demodulate_zf: block length mismatch");
    return solver_.solve(x_hat);
  }

  double condition() const { return solver_.condition(); }

private:
  numerics::LinearSolver solver_;
};

/// d_hat = A^{-1} x_hat.
inline ComplexVector demodulate_zf(const TransmitterMatrix &tm, const ComplexVector &x_hat) {
  return ZfDemodulator(tm)(x_hat);
}

} // namespace modem
} // namespace gfdm
