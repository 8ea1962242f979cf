#pragma once

// End-to-end link and Monte Carlo harness.
//
// Every trial (channel realization r, data block b) draws its channel, data and
// unit-variance noise from streams seeded by (master seed, r, b) only, so the
// same random numbers feed every scheme and every SNR point, and the results do
// not depend on how trials are spread over worker threads. Per-trial results are
// stored by index and reduced in index order.

#include <gfdm/lmmse.hpp>

#include <atomic>
#include <cstdint>
#include <exception>
#include <iostream>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace gfdm {

/// Raised when a trial fails; the message names scheme, SNR and trial.
class SimulationError : public Error {
public:
  using Error::Error;
};

enum class SimScheme { Genie, Conventional, Proposed, Ofdm, Ls };

inline std::string to_string(SimScheme s) {
  switch (s) {
  case SimScheme::Genie:
    return "genie";
  case SimScheme::Conventional:
    return "conventional";
  case SimScheme::Proposed:
    return "proposed";
  case SimScheme::Ofdm:
    return "ofdm";
  case SimScheme::Ls:
    return "ls";
  }
  return "unknown";
}

inline SimScheme parse_scheme(const std::string &s) {
  if (s == "genie")
    return SimScheme::Genie;
  if (s == "conventional")
    return SimScheme::Conventional;
  if (s == "proposed")
    return SimScheme::Proposed;
  if (s == "ofdm")
    return SimScheme::Ofdm;
  if (s == "ls")
    return SimScheme::Ls;
  throw ConfigError("unknown scheme '" + s + "'");
}

struct ExperimentSpec {
  GfdmConfig gfdm = GfdmConfig::full(8, 128, 16, FilterSpec::dirichlet());
  Index taps = 0; // channel length N; 0 means N = K
  std::vector<SimScheme> schemes{SimScheme::Genie, SimScheme::Conventional, SimScheme::Proposed,
                                 SimScheme::Ofdm};
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30, 35, 40};
  Index n_h = 100;
  Index n_d = 100;
  double es = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t ref_seed = 7;
  std::vector<Index> pilot_positions; // empty: first subsymbol
  std::vector<Index> bins;            // empty: subcarrier centres
  unsigned workers = 1;

  Index channel_taps() const { return taps > 0 ? taps : gfdm.K; }

  void validate() const {
    gfdm.validate();
    if (n_h < 1 || n_d < 1)
      throw ConfigError("N_h and N_d must be >= 1");
    if (snr_db.empty())
      throw ConfigError("SNR grid must be nonempty");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
      if (!(snr_db[i] > snr_db[i - 1]))
        throw ConfigError("SNR grid must be strictly increasing");
    if (schemes.empty())
      throw ConfigError("no schemes selected");
    if (!(es > 0.0))
      throw ConfigError("Es must be positive");
    if (channel_taps() - 1 > gfdm.L)
      throw ConfigError("channel order N-1 exceeds the CP length L");
    if (channel_taps() > gfdm.D())
      throw ConfigError("channel longer than the block");
  }
};

struct CurvePoint {
  std::string scheme;
  std::string filter;
  Index K = 0;
  Index M = 0;
  double snr_db = 0.0;
  double mse = 0.0;
  double ser = 0.0;
  double pilot_energy_avg = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t data_symbols = 0;
};

namespace sim {

/// splitmix64 finalizer.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix(mix(mix(master) ^ a) ^ (b + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t kChannelStream = ~std::uint64_t{0};

/// Gray-mapped QPSK: bit 0 picks the real sign, bit 1 the imaginary sign.
inline cdouble qpsk_symbol(int index, double es = 1.0) {
  const double a = std::sqrt(es / 2.0);
  return {index & 1 ? -a : a, index & 2 ? -a : a};
}

/// Nearest QPSK point; ties go to the positive real, then positive imaginary side.
inline std::vector<int> detect_qpsk(const ComplexVector &d_hat) {
  std::vector<int> out(static_cast<std::size_t>(d_hat.size()));
  for (Index i = 0; i < d_hat.size(); ++i)
    out[static_cast<std::size_t>(i)] = (d_hat(i).real() < 0.0 ? 1 : 0) | (d_hat(i).imag() < 0.0 ? 2 : 0);
  return out;
}

/// Zero-forcing frequency-domain equalizer: W^H diag(F_N h_hat)^{-1} W y.
inline ComplexVector equalize_fd(const ComplexVector &y, const ComplexVector &h_hat, Index d) {
  if (y.size() != d)
    throw InvalidDimension("equalize_fd: block length mismatch");
  const ComplexVector hf = channel::frequency_response(h_hat, d);
  for (Index i = 0; i < d; ++i)
    if (hf(i) == cdouble(0.0, 0.0))
      throw EqualizationSingularity("equalize_fd: channel coefficient at bin " + std::to_string(i) +
                                    " is zero");
  return numerics::idft(numerics::dft(y).cwiseQuotient(hf));
}

/// OFDM on the same block size: A = W_D^H, pilots placed directly on the bins.
struct OfdmBaseline {
  TransmitterMatrix tm;
  PilotScheme scheme;
};

inline OfdmBaseline ofdm_baseline(Index d, const FrequencyBinSet &bins, const ComplexVector &d_r) {
  OfdmBaseline o;
  o.tm.A = numerics::dft_matrix(d).adjoint();
  o.tm.g = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  o.tm.K = d;
  o.tm.M = 1;
  o.scheme = pilot::conventional_scheme(PilotPlacement(bins.bins, d), bins, d_r, PilotKind::OfdmComb);
  return o;
}

/// Everything a trial needs for one scheme, shared read-only across workers.
struct SchemeContext {
  SimScheme label = SimScheme::Genie;
  std::shared_ptr<const TransmitterMatrix> tm;
  std::shared_ptr<const modem::ZfDemodulator> demod;
  PilotScheme scheme;
  std::vector<LmmseEstimator> estimators; // one per SNR point; empty for genie and LS
};

struct TrialResult {
  double mse = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t symbols = 0;
  double pilot_energy = 0.0;
  bool singular = false;
};

/// Random inputs of one trial, shared by all schemes and SNR points.
struct TrialDraw {
  ChannelRealization channel;
  std::vector<int> data_indices;
  ComplexVector d_d;
  ComplexVector unit_noise;
};

inline TrialDraw draw_trial(const ExperimentSpec &spec, const PowerDelayProfile &pdp, Index data_count,
                            Index realization, Index block) {
  TrialDraw t;
  std::mt19937_64 ch_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(realization), kChannelStream));
  t.channel = channel::draw_channel(pdp, ch_rng);
  std::mt19937_64 rng(
      derive_seed(spec.seed, static_cast<std::uint64_t>(realization), static_cast<std::uint64_t>(block)));
  t.data_indices.resize(static_cast<std::size_t>(data_count));
  t.d_d.resize(data_count);
  for (Index i = 0; i < data_count; ++i) {
    const int idx = static_cast<int>(rng() & 3u);
    t.data_indices[static_cast<std::size_t>(i)] = idx;
    t.d_d(i) = qpsk_symbol(idx, spec.es);
  }
  t.unit_noise = complex_normal_vector(spec.gfdm.D(), rng);
  return t;
}

/// One block through one scheme at one noise level.
inline TrialResult run_trial(const SchemeContext &ctx, std::size_t snr_index, const TrialDraw &draw,
                             double n0, const ComplexVector &hx, const GeneratedBlock &block) {
  TrialResult r;
  r.pilot_energy = pilot::pilot_energy(block.d_p);
  const ComplexVector y = hx + std::sqrt(n0) * draw.unit_noise;
  const Index taps = draw.channel.taps();
  ComplexVector h_hat;
  switch (ctx.label) {
  case SimScheme::Genie:
    h_hat = draw.channel.h;
    break;
  case SimScheme::Ls:
    h_hat = lmmse::ls_estimate(y, ctx.scheme, taps);
    break;
  default:
    h_hat = lmmse::estimate(ctx.estimators.at(snr_index), y);
  }
  r.mse = lmmse::channel_mse(draw.channel.h, h_hat);
  const Index data_count = static_cast<Index>(draw.data_indices.size());
  r.symbols = static_cast<std::uint64_t>(data_count);
  try {
    const ComplexVector x_hat = equalize_fd(y, h_hat, y.size());
    const ComplexVector d_hat = (*ctx.demod)(x_hat);
    const std::vector<int> detected = detect_qpsk(ctx.scheme.placement.extract_data(d_hat));
    for (Index i = 0; i < data_count; ++i)
      if (detected[static_cast<std::size_t>(i)] != draw.data_indices[static_cast<std::size_t>(i)])
        ++r.errors;
  } catch (const EqualizationSingularity &) {
    r.singular = true;
    r.errors = r.symbols;
  }
  return r;
}

/// Builds transmitter, pilots and per-SNR estimators for every requested scheme.
inline std::vector<SchemeContext> build_contexts(const ExperimentSpec &spec) {
  spec.validate();
  const Index K = spec.gfdm.K, M = spec.gfdm.M, d = spec.gfdm.D();
  const PowerDelayProfile pdp = channel::exponential_pdp(spec.channel_taps());
  const PilotPlacement placement = spec.pilot_positions.empty()
                                       ? pilot::default_placement(K, M)
                                       : PilotPlacement(spec.pilot_positions, d);
  FrequencyBinSet bins = spec.bins.empty() ? pilot::default_bins(K, M) : FrequencyBinSet{spec.bins};
  bins.validate(d);
  if (placement.p() < spec.channel_taps())
    throw ConfigError("pilot count p must be at least the channel length N");
  const ComplexVector d_r = pilot::reference_sequence(placement.p(), spec.es, spec.ref_seed);

  auto gfdm_tm = std::make_shared<const TransmitterMatrix>(modem::transmitter_matrix(spec.gfdm));
  std::shared_ptr<const modem::ZfDemodulator> gfdm_demod;
  const auto needs_gfdm = [&] {
    for (auto s : spec.schemes)
      if (s != SimScheme::Ofdm)
        return true;
    return false;
  }();
  if (needs_gfdm)
    gfdm_demod = std::make_shared<const modem::ZfDemodulator>(*gfdm_tm);

  std::vector<SchemeContext> out;
  for (SimScheme label : spec.schemes) {
    SchemeContext ctx;
    ctx.label = label;
    if (label == SimScheme::Ofdm) {
      OfdmBaseline o = ofdm_baseline(d, bins, d_r);
      ctx.tm = std::make_shared<const TransmitterMatrix>(std::move(o.tm));
      ctx.demod = std::make_shared<const modem::ZfDemodulator>(*ctx.tm);
      ctx.scheme = std::move(o.scheme);
    } else {
      ctx.tm = gfdm_tm;
      ctx.demod = gfdm_demod;
      if (label == SimScheme::Proposed || label == SimScheme::Ls)
        ctx.scheme = pilot::proposed_scheme(*gfdm_tm, placement, bins, d_r);
      else
        ctx.scheme = pilot::conventional_scheme(placement, bins, d_r);
    }
    if (label == SimScheme::Conventional || label == SimScheme::Proposed || label == SimScheme::Ofdm) {
      const ComplexMatrix sigma_psi =
          lmmse::interference_covariance(pdp.covariance(), ctx.tm->A, ctx.scheme.T, spec.es);
      for (double snr : spec.snr_db)
        ctx.estimators.push_back(lmmse::build_estimator(*ctx.tm, ctx.scheme, pdp,
                                                        NoiseSpec::from_snr_db(snr, spec.es).n0,
                                                        spec.es, &sigma_psi));
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

/// Runs every scheme x SNR point over N_h * N_d trials.
inline std::vector<CurvePoint> monte_carlo(const ExperimentSpec &spec,
                                           const std::vector<SchemeContext> &contexts) {
  spec.validate();
  const PowerDelayProfile pdp = channel::exponential_pdp(spec.channel_taps());
  const std::size_t n_snr = spec.snr_db.size();
  const std::size_t n_ctx = contexts.size();
  const Index n_trials = spec.n_h * spec.n_d;
  const Index data_count = spec.gfdm.D() - contexts.front().scheme.p();
  for (const auto &c : contexts)
    if (spec.gfdm.D() - c.scheme.p() != data_count)
      throw SimulationError("all schemes must carry the same number of data symbols");

  std::vector<TrialResult> results(n_ctx * n_snr * static_cast<std::size_t>(n_trials));
  const auto slot = [&](std::size_t c, std::size_t s, Index t) -> TrialResult & {
    return results[(c * n_snr + s) * static_cast<std::size_t>(n_trials) + static_cast<std::size_t>(t)];
  };

  std::atomic<Index> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  Index first_error_trial = n_trials;

  const auto worker = [&] {
    for (;;) {
      const Index t = next.fetch_add(1);
      if (t >= n_trials)
        return;
      const Index r = t / spec.n_d, b = t % spec.n_d;
      std::size_t c = 0, s = 0;
      try {
        const TrialDraw draw = draw_trial(spec, pdp, data_count, r, b);
        for (c = 0; c < n_ctx; ++c) {
          const SchemeContext &ctx = contexts[c];
          const GeneratedBlock block = pilot::generate_block(ctx.scheme, draw.d_d);
          const ComplexVector hx = channel::circular_convolve(draw.channel.h, modem::modulate(*ctx.tm, block.d));
          for (s = 0; s < n_snr; ++s) {
            const double n0 = NoiseSpec::from_snr_db(spec.snr_db[s], spec.es).n0;
            TrialResult res = run_trial(ctx, s, draw, n0, hx, block);
            if (res.singular) {
              std::lock_guard lock(err_mu);
              std::cerr << "warning: equalization singularity, scheme " << to_string(ctx.label)
                        << " snr " << spec.snr_db[s] << " dB trial " << r << "/" << b
                        << "; counted as fully errored\n";
            }
            slot(c, s, t) = res;
          }
        }
      } catch (const std::exception &e) {
        std::lock_guard lock(err_mu);
        if (t < first_error_trial) {
          first_error_trial = t;
          const std::string where = c < n_ctx ? to_string(contexts[c].label) : "?";
          const std::string snr = s < n_snr ? std::to_string(spec.snr_db[s]) : "?";
          first_error = std::make_exception_ptr(SimulationError(
              "scheme " + where + ", snr " + snr + " dB, trial (realization " + std::to_string(r) +
              ", block " + std::to_string(b) + "): " + e.what()));
        }
        next.store(n_trials);
        return;
      }
    }
  };

  const unsigned n_workers = std::max(1u, spec.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_workers; ++i)
      pool.emplace_back(worker);
  }
  if (first_error)
    std::rethrow_exception(first_error);

  std::vector<CurvePoint> points;
  for (std::size_t c = 0; c < n_ctx; ++c)
    for (std::size_t s = 0; s < n_snr; ++s) {
      CurvePoint pt;
      pt.scheme = to_string(contexts[c].label);
      pt.filter = contexts[c].label == SimScheme::Ofdm ? "none" : spec.gfdm.filter.name();
      pt.K = spec.gfdm.K;
      pt.M = spec.gfdm.M;
      pt.snr_db = spec.snr_db[s];
      double mse_sum = 0.0, energy_sum = 0.0;
      for (Index t = 0; t < n_trials; ++t) {
        const TrialResult &res = slot(c, s, t);
        mse_sum += res.mse;
        energy_sum += res.pilot_energy;
        pt.symbol_errors += res.errors;
        pt.data_symbols += res.symbols;
      }
      pt.trials = static_cast<std::uint64_t>(n_trials);
      pt.mse = mse_sum / static_cast<double>(n_trials);
      pt.pilot_energy_avg = energy_sum / static_cast<double>(n_trials);
      pt.ser = pt.data_symbols ? static_cast<double>(pt.symbol_errors) / static_cast<double>(pt.data_symbols) : 0.0;
      points.push_back(pt);
    }
  return points;
}

inline std::vector<CurvePoint> monte_carlo(const ExperimentSpec &spec) {
  return monte_carlo(spec, build_contexts(spec));
}

} // namespace sim
} // namespace gfdm
