#pragma once

// LMMSE channel estimation for the pilot framework.
//
// With X_r = diag(W_D A S d_r) the received samples are
//   y = W_D^H X_r F_N h + W_D^H Psi + w,   Psi = diag(W_D A T d_d) F_N h,
// and the estimator minimizing E||h - G y||^2 is
//   G = Sigma_hh (X_r F_N)^H [ (X_r F_N) Sigma_hh (X_r F_N)^H + Sigma_PsiPsi + N0 I ]^{-1} W_D.

#include <gfdm/channel.hpp>
#include <gfdm/pilot.hpp>

#include <Eigen/QR>

namespace gfdm {

struct LmmseEstimator {
  ComplexMatrix G;         // N x D
  ComplexVector x_r;       // diagonal of X_r
  ComplexMatrix sigma_hh;  // N x N
  ComplexMatrix sigma_psi; // D x D
  double n0 = 0.0;
  double es = 1.0;

  Index taps() const { return G.rows(); }
  Index D() const { return G.cols(); }
};

namespace lmmse {

/// W_D A T, the frequency-domain image of the data path.
inline ComplexMatrix data_image(const ComplexMatrix &a, const ComplexMatrix &t) {
  if (a.cols() != t.rows())
    throw InvalidDimension("data_image: A and T dimensions disagree");
  return numerics::dft_columns(a * t);
}

/// Es * (F_N Sigma_hh F_N^H) .* (U U^H) for a precomputed U = W_D A T.
inline ComplexMatrix interference_covariance_from_image(const ComplexMatrix &sigma_hh,
                                                        const ComplexMatrix &u, double es) {
  const Index d = u.rows();
  if (sigma_hh.rows() != sigma_hh.cols() || sigma_hh.rows() > d)
    throw InvalidDimension("interference_covariance: Sigma_hh must be N x N with N <= D");
  const ComplexMatrix f = numerics::partial_fourier(d, sigma_hh.rows());
  const ComplexMatrix r_h = f * sigma_hh * f.adjoint();
  ComplexMatrix uu(d, d);
  if (u.cols() == 0)
    uu.setZero();
  else
    uu.noalias() = u * u.adjoint();
  return es * r_h.cwiseProduct(uu);
}

inline ComplexMatrix interference_covariance(const ComplexMatrix &sigma_hh, const ComplexMatrix &a,
                                             const ComplexMatrix &t, double es) {
  return interference_covariance_from_image(sigma_hh, data_image(a, t), es);
}

/// Diagonal of X_r = diag(W_D A S d_r).
inline ComplexVector reference_diagonal(const TransmitterMatrix &tm, const PilotScheme &scheme) {
  return numerics::dft(tm.A * (scheme.S * scheme.d_r));
}

namespace detail {

inline ComplexMatrix pilot_image(const ComplexVector &x_r, Index taps) {
  return x_r.asDiagonal() * numerics::partial_fourier(x_r.size(), taps);
}

inline ComplexMatrix bracket(const ComplexMatrix &xf, const ComplexMatrix &sigma_hh,
                             const ComplexMatrix &sigma_psi, double n0) {
  ComplexMatrix b = xf * sigma_hh * xf.adjoint() + sigma_psi;
  b.diagonal().array() += n0;
  return b;
}

// R W_D for an R with D columns (W_D is symmetric).
inline ComplexMatrix right_dft(const ComplexMatrix &r) {
  return numerics::dft_columns(r.transpose()).transpose();
}

// G W_D^H = (W_D G^H)^H.
inline ComplexMatrix right_idft(const ComplexMatrix &g) {
  return numerics::dft_columns(g.adjoint()).adjoint();
}

inline void check_shapes(const ComplexVector &x_r, const ComplexMatrix &sigma_hh,
                         const ComplexMatrix &sigma_psi) {
  const Index d = x_r.size();
  if (sigma_psi.rows() != d || sigma_psi.cols() != d)
    throw InvalidDimension("lmmse: Sigma_PsiPsi must be D x D");
  if (sigma_hh.rows() != sigma_hh.cols() || sigma_hh.rows() > d || sigma_hh.rows() < 1)
    throw InvalidDimension("lmmse: Sigma_hh must be N x N with 1 <= N <= D");
}

} // namespace detail

/// The closed-form gain. The bracketed inverse is applied by a Cholesky solve.
inline ComplexMatrix lmmse_gain(const ComplexVector &x_r, const ComplexMatrix &sigma_hh,
                                const ComplexMatrix &sigma_psi, double n0) {
  detail::check_shapes(x_r, sigma_hh, sigma_psi);
  if (n0 < 0.0)
    throw InvalidParameter("lmmse_gain: negative noise variance");
  const ComplexMatrix xf = detail::pilot_image(x_r, sigma_hh.rows());
  const ComplexMatrix b = detail::bracket(xf, sigma_hh, sigma_psi, n0);
  // B Hermitian: (XF)^H B^{-1} = (B^{-1} XF)^H
  const ComplexMatrix z = numerics::hermitian_solve(b, xf);
  return detail::right_dft(sigma_hh * z.adjoint());
}

/// Derivative of E||h - G y||^2 with respect to conj(G); zero at the optimum.
inline ComplexMatrix wirtinger_gradient(const ComplexMatrix &g, const ComplexVector &x_r,
                                        const ComplexMatrix &sigma_hh,
                                        const ComplexMatrix &sigma_psi, double n0) {
  detail::check_shapes(x_r, sigma_hh, sigma_psi);
  const ComplexMatrix xf = detail::pilot_image(x_r, sigma_hh.rows());
  const ComplexMatrix b = detail::bracket(xf, sigma_hh, sigma_psi, n0);
  const ComplexMatrix q = detail::right_idft(g);
  return detail::right_dft(ComplexMatrix(-sigma_hh * xf.adjoint() + q * b));
}

/// tr(Sigma_hh) - 2 Re tr(G W^H X_r F Sigma_hh) + tr(G W^H B W G^H).
inline double expected_square_error(const ComplexMatrix &g, const ComplexVector &x_r,
                                    const ComplexMatrix &sigma_hh, const ComplexMatrix &sigma_psi,
                                    double n0) {
  detail::check_shapes(x_r, sigma_hh, sigma_psi);
  const ComplexMatrix xf = detail::pilot_image(x_r, sigma_hh.rows());
  const ComplexMatrix b = detail::bracket(xf, sigma_hh, sigma_psi, n0);
  const ComplexMatrix q = detail::right_idft(g);
  const cdouble cross = (q * xf * sigma_hh).trace();
  const cdouble quad = (q * b * q.adjoint()).trace();
  return sigma_hh.trace().real() - 2.0 * cross.real() + quad.real();
}

/// Builds the estimator for one (scheme, noise level). Sigma_PsiPsi does not
/// depend on N0, so callers sweeping SNR pass it in precomputed.
inline LmmseEstimator build_estimator(const TransmitterMatrix &tm, const PilotScheme &scheme,
                                      const PowerDelayProfile &pdp, double n0, double es,
                                      const ComplexMatrix *sigma_psi = nullptr) {
  LmmseEstimator est;
  est.sigma_hh = pdp.covariance();
  est.x_r = reference_diagonal(tm, scheme);
  est.sigma_psi =
      sigma_psi ? *sigma_psi : interference_covariance(est.sigma_hh, tm.A, scheme.T, es);
  est.n0 = n0;
  est.es = es;
  est.G = lmmse_gain(est.x_r, est.sigma_hh, est.sigma_psi, n0);
  return est;
}

inline ComplexMatrix wirtinger_gradient(const LmmseEstimator &e) {
  return wirtinger_gradient(e.G, e.x_r, e.sigma_hh, e.sigma_psi, e.n0);
}

inline double expected_square_error(const LmmseEstimator &e) {
  return expected_square_error(e.G, e.x_r, e.sigma_hh, e.sigma_psi, e.n0);
}

/// h_hat = G y.
inline ComplexVector estimate(const ComplexMatrix &g, const ComplexVector &y) {
  if (y.size() != g.cols())
    throw InvalidDimension("estimate: received block length mismatch");
  return g * y;
}

inline ComplexVector estimate(const LmmseEstimator &e, const ComplexVector &y) {
  return estimate(e.G, y);
}

/// Least squares on the pinned bins: diag(d_r) [F_N]_{I,:} h = [W_D y]_I.
inline ComplexVector ls_estimate(const ComplexVector &y, const ComplexVector &d_r,
                                 const FrequencyBinSet &bins, Index taps) {
  const Index d = y.size();
  if (d_r.size() != bins.size())
    throw InvalidDimension("ls_estimate: reference length must equal |I|");
  if (bins.size() < taps || taps < 1)
    throw InvalidDimension("ls_estimate: need 1 <= N <= |I|");
  bins.validate(d);
  const ComplexMatrix f = numerics::partial_fourier(d, taps);
  ComplexMatrix sys(bins.size(), taps);
  for (Index r = 0; r < bins.size(); ++r)
    sys.row(r) = d_r(r) * f.row(bins.bins[static_cast<std::size_t>(r)]);
  const ComplexVector rhs = bins.select(numerics::dft(y));
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(sys);
  qr.setThreshold(1e-10);
  if (qr.rank() < taps)
    throw SingularMatrix("ls_estimate: pilot system is rank deficient",
                         std::numeric_limits<double>::infinity());
  return qr.solve(rhs);
}

inline ComplexVector ls_estimate(const ComplexVector &y, const PilotScheme &scheme, Index taps) {
  return ls_estimate(y, scheme.d_r, scheme.bins, taps);
}

/// ||h - h_hat||^2.
inline double channel_mse(const ComplexVector &h, const ComplexVector &h_hat) {
  if (h.size() != h_hat.size())
    throw InvalidDimension("channel_mse: length mismatch");
  return (h - h_hat).squaredNorm();
}

} // namespace lmmse
} // namespace gfdm
