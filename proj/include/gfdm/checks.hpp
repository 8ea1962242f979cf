#pragma once

// Numerical self-checks behind `gfdm_sim validate`. Each check evaluates one
// structural property on the configured geometry by an independent route.

#include <gfdm/sim.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gfdm::checks {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

inline CheckResult upper_bound(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

inline CheckResult lower_bound(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value > threshold, std::move(detail)};
}

/// Dirichlet blocks must be unitary; raised-cosine blocks with even K and M must not be.
inline CheckResult unitarity(const TransmitterMatrix &tm, const FilterSpec &filter) {
  const double defect = numerics::unitarity_defect(tm.A);
  if (filter.kind == FilterKind::Dirichlet)
    return upper_bound("dirichlet unitarity ||A^H A - I||_F", defect, 1e-9);
  if (tm.K % 2 == 0 && tm.M % 2 == 0)
    return lower_bound("rc non-unitarity ||A^H A - I||_F", defect, 1e-3);
  return {"rc unitarity defect (informational)", defect, 0.0, true, "odd K or M"};
}

/// Time-domain circulant output against W^H diag(W A d) F_N h, worst relative error.
template <std::uniform_random_bit_generator Rng>
CheckResult dual_form(const TransmitterMatrix &tm, const PowerDelayProfile &pdp, int instances, Rng &rng) {
  const Index d = tm.D();
  const ComplexMatrix f = numerics::partial_fourier(d, pdp.taps());
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const ComplexVector data = complex_normal_vector(d, rng);
    const ChannelRealization ch = channel::draw_channel(pdp, rng);
    const ComplexVector x = tm.A * data;
    const ComplexVector time_form = numerics::circulant(ch.h, d) * x;
    const ComplexVector freq_form = numerics::idft(numerics::dft(x).cwiseProduct(f * ch.h));
    worst = std::max(worst, (time_form - freq_form).norm() / time_form.norm());
  }
  return upper_bound("circulant vs diagonalized channel (relative)", worst, 1e-9);
}

/// max over random data blocks of ||[W_D A d]_I - d_r||.
template <std::uniform_random_bit_generator Rng>
CheckResult precancellation(const TransmitterMatrix &tm, const PilotScheme &scheme, double es, int blocks,
                            Rng &rng) {
  double worst = 0.0;
  const Index n_data = scheme.D() - scheme.p();
  for (int i = 0; i < blocks; ++i) {
    ComplexVector d_d(n_data);
    for (Index k = 0; k < n_data; ++k)
      d_d(k) = sim::qpsk_symbol(static_cast<int>(rng() & 3u), es);
    const GeneratedBlock blk = pilot::generate_block(scheme, d_d);
    const ComplexVector xf = numerics::dft(tm.A * blk.d);
    worst = std::max(worst, (scheme.bins.select(xf) - scheme.d_r).norm());
  }
  return upper_bound("precancellation ||[W A d]_I - d_r||", worst, 1e-9);
}

/// Frobenius norm of the conj(G) derivative at the closed-form gain.
inline CheckResult stationarity(const LmmseEstimator &est, const std::string &label) {
  return upper_bound("stationarity " + label, lmmse::wirtinger_gradient(est).norm(), 1e-8);
}

/// Noiseless LS on the pinned bins of a precancelling scheme recovers h.
template <std::uniform_random_bit_generator Rng>
CheckResult ls_exactness(const TransmitterMatrix &tm, const PilotScheme &scheme, const PowerDelayProfile &pdp,
                         double es, Rng &rng) {
  const Index n_data = scheme.D() - scheme.p();
  ComplexVector d_d(n_data);
  for (Index k = 0; k < n_data; ++k)
    d_d(k) = sim::qpsk_symbol(static_cast<int>(rng() & 3u), es);
  const ChannelRealization ch = channel::draw_channel(pdp, rng);
  const ComplexVector y = channel::circular_convolve(ch.h, tm.A * pilot::generate_block(scheme, d_d).d);
  const ComplexVector h_ls = lmmse::ls_estimate(y, scheme, pdp.taps());
  return upper_bound("noiseless LS recovery ||h - h_ls||", (h_ls - ch.h).norm(), 1e-9);
}

/// Sample second moment of Psi = diag(W_D A T d_d) F_N h over joint draws of
/// (d_d, h), accumulated in batches.
template <std::uniform_random_bit_generator Rng>
ComplexMatrix empirical_interference_covariance(const TransmitterMatrix &tm, const PilotScheme &scheme,
                                                const PowerDelayProfile &pdp, double es, Index samples,
                                                Rng &rng, Index batch = 500) {
  const Index d = tm.D();
  const Index n_data = d - scheme.p();
  const ComplexMatrix u = lmmse::data_image(tm.A, scheme.T);
  const ComplexMatrix f = numerics::partial_fourier(d, pdp.taps());
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (Index done = 0; done < samples; done += batch) {
    const Index b = std::min(batch, samples - done);
    ComplexMatrix data(n_data, b), taps(pdp.taps(), b);
    for (Index j = 0; j < b; ++j) {
      for (Index k = 0; k < n_data; ++k)
        data(k, j) = sim::qpsk_symbol(static_cast<int>(rng() & 3u), es);
      taps.col(j) = channel::draw_channel(pdp, rng).h;
    }
    const ComplexMatrix psi = (u * data).cwiseProduct(f * taps);
    acc.noalias() += psi * psi.adjoint();
  }
  return acc / static_cast<double>(samples);
}

template <std::uniform_random_bit_generator Rng>
CheckResult covariance_oracle(const TransmitterMatrix &tm, const PilotScheme &scheme, const PowerDelayProfile &pdp,
                              double es, Index samples, Rng &rng) {
  const ComplexMatrix analytic = lmmse::interference_covariance(pdp.covariance(), tm.A, scheme.T, es);
  const ComplexMatrix empirical = empirical_interference_covariance(tm, scheme, pdp, es, samples, rng);
  return upper_bound("interference covariance vs " + std::to_string(samples) + "-sample estimate",
                     numerics::relative_error(analytic, empirical, empirical), 0.1);
}

/// Every check that applies to the configured experiment. The covariance
/// oracle runs only when oracle_samples > 0.
inline std::vector<CheckResult> validate_experiment(const ExperimentSpec &spec, Index oracle_samples = 0) {
  std::mt19937_64 rng(spec.seed);
  const PowerDelayProfile pdp = channel::exponential_pdp(spec.channel_taps());
  const std::vector<sim::SchemeContext> contexts = sim::build_contexts(spec);
  std::vector<CheckResult> out;
  const TransmitterMatrix gfdm_tm = modem::transmitter_matrix(spec.gfdm);
  out.push_back(unitarity(gfdm_tm, spec.gfdm.filter));
  out.push_back(dual_form(gfdm_tm, pdp, 3, rng));
  for (const auto &ctx : contexts) {
    const std::string label = to_string(ctx.label);
    if (ctx.scheme.kind == PilotKind::ProposedPrecancel) {
      CheckResult r = precancellation(*ctx.tm, ctx.scheme, spec.es, 5, rng);
      r.name += " [" + label + "]";
      out.push_back(r);
    }
    if (ctx.label == SimScheme::Ls) {
      CheckResult r = ls_exactness(*ctx.tm, ctx.scheme, pdp, spec.es, rng);
      r.name += " [" + label + "]";
      out.push_back(r);
    }
    for (std::size_t i = 0; i < ctx.estimators.size(); ++i) {
      std::ostringstream tag;
      tag << "[" << label << ", " << spec.snr_db[i] << " dB]";
      out.push_back(stationarity(ctx.estimators[i], tag.str()));
    }
    if (oracle_samples > 0 && !ctx.estimators.empty()) {
      CheckResult r = covariance_oracle(*ctx.tm, ctx.scheme, pdp, spec.es, oracle_samples, rng);
      r.name += " [" + label + "]";
      out.push_back(r);
    }
  }
  return out;
}

} // namespace gfdm::checks
