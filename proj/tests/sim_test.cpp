#include <gfdm/sim.hpp>

#include <gtest/gtest.h>

#include <limits>
#include <set>

using namespace gfdm;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.gfdm = GfdmConfig::full(4, 8, 4, FilterSpec::dirichlet());
  s.schemes = {SimScheme::Genie, SimScheme::Conventional, SimScheme::Proposed, SimScheme::Ofdm, SimScheme::Ls};
  s.snr_db = {0.0, 10.0, 20.0, 30.0};
  s.n_h = 10;
  s.n_d = 5;
  return s;
}

const CurvePoint &find(const std::vector<CurvePoint> &pts, const std::string &scheme, double snr) {
  for (const auto &p : pts)
    if (p.scheme == scheme && p.snr_db == snr)
      return p;
  throw std::runtime_error("missing point " + scheme);
}

} // namespace

TEST(Qpsk, GrayMappingAndDetectionRoundTrip) {
  const double a = std::sqrt(0.5);
  EXPECT_EQ(sim::qpsk_symbol(0), cdouble(a, a));
  EXPECT_EQ(sim::qpsk_symbol(1), cdouble(-a, a));
  EXPECT_EQ(sim::qpsk_symbol(2), cdouble(a, -a));
  EXPECT_EQ(sim::qpsk_symbol(3), cdouble(-a, -a));
  EXPECT_NEAR(std::norm(sim::qpsk_symbol(3, 4.0)), 4.0, 1e-12);
  ComplexVector v(4);
  for (int i = 0; i < 4; ++i)
    v(i) = 0.3 * sim::qpsk_symbol(i);
  EXPECT_EQ(sim::detect_qpsk(v), (std::vector<int>{0, 1, 2, 3}));
}

TEST(Qpsk, TiesGoToPositiveSide) {
  ComplexVector v(4);
  v << cdouble(0.0, 0.0), cdouble(0.0, -1.0), cdouble(-1.0, 0.0), cdouble(-0.0, -0.0);
  EXPECT_EQ(sim::detect_qpsk(v), (std::vector<int>{0, 2, 1, 0}));
}

TEST(EqualizeFd, IdentityChannel) {
  ComplexVector y(4);
  y << 1.0, cdouble(0.0, 2.0), -3.0, 0.5;
  EXPECT_LE((sim::equalize_fd(y, ComplexVector::Ones(1), 4) - y).norm(), 1e-12);
}

TEST(EqualizeFd, InvertsCircularChannel) {
  std::mt19937_64 rng(5);
  const ComplexVector x = complex_normal_vector(32, rng);
  ComplexVector h(3);
  h << 1.0, cdouble(0.4, -0.2), 0.1;
  EXPECT_LE((sim::equalize_fd(channel::circular_convolve(h, x), h, 32) - x).norm(), 1e-10);
}

TEST(EqualizeFd, ZeroBinAndMismatchRejected) {
  // h = [1, 1] has a zero at the Nyquist bin of an even-length block
  ComplexVector h(2);
  h << 1.0, 1.0;
  EXPECT_THROW(sim::equalize_fd(ComplexVector::Ones(4), h, 4), EqualizationSingularity);
  EXPECT_THROW(sim::equalize_fd(ComplexVector::Ones(4), ComplexVector::Zero(1), 4), EqualizationSingularity);
  EXPECT_THROW(sim::equalize_fd(ComplexVector::Ones(3), h, 4), InvalidDimension);
}

TEST(Seeds, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 50; ++r) {
    seen.insert(sim::derive_seed(1, r, sim::kChannelStream));
    for (std::uint64_t b = 0; b < 20; ++b)
      seen.insert(sim::derive_seed(1, r, b));
  }
  EXPECT_EQ(seen.size(), 50u * 21u);
  EXPECT_NE(sim::derive_seed(1, 0, 0), sim::derive_seed(2, 0, 0));
}

TEST(SchemeNames, ParseAndPrint) {
  for (SimScheme s : {SimScheme::Genie, SimScheme::Conventional, SimScheme::Proposed, SimScheme::Ofdm, SimScheme::Ls})
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("mmse"), ConfigError);
}

TEST(OfdmBaseline, IdentityDemodulationAndNulledPilotBins) {
  const Index K = 4, M = 8, D = 32;
  const FrequencyBinSet bins = pilot::default_bins(K, M);
  const sim::OfdmBaseline o = sim::ofdm_baseline(D, bins, pilot::reference_sequence(K, 1.0, 7));
  EXPECT_LE((numerics::dft_matrix(D) * o.tm.A - ComplexMatrix::Identity(D, D)).norm(), 1e-12);
  const ComplexMatrix c =
      lmmse::interference_covariance(channel::exponential_pdp(K).covariance(), o.tm.A, o.scheme.T, 1.0);
  for (Index b : bins.bins)
    EXPECT_LE(c.row(b).norm(), 1e-12);
  EXPECT_EQ(o.scheme.placement.pilot_positions(), bins.bins);
}

TEST(ExperimentSpec, Validation) {
  ExperimentSpec s = small_spec();
  EXPECT_NO_THROW(s.validate());
  s.taps = 6; // N - 1 = 5 > L = 4
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.snr_db = {10.0, 5.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.n_d = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.schemes.clear();
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.taps = 5;
  s.gfdm.L = 8;
  EXPECT_THROW(sim::build_contexts(s), ConfigError); // p = K = 4 < N = 5
}

TEST(MonteCarlo, NoiselessGenieIsErrorFree) {
  ExperimentSpec s = small_spec();
  s.schemes = {SimScheme::Genie};
  s.snr_db = {std::numeric_limits<double>::infinity()};
  const auto pts = sim::monte_carlo(s);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].ser, 0.0);
  EXPECT_EQ(pts[0].mse, 0.0);
}

TEST(MonteCarlo, PureNoiseGivesRandomDecisions) {
  ExperimentSpec s = small_spec();
  s.schemes = {SimScheme::Genie, SimScheme::Conventional};
  s.snr_db = {-60.0};
  s.n_h = 20;
  s.n_d = 10;
  for (const auto &p : sim::monte_carlo(s))
    EXPECT_NEAR(p.ser, 0.75, 0.05) << p.scheme;
}

TEST(MonteCarlo, AccountingAndLabels) {
  const ExperimentSpec s = small_spec();
  const auto pts = sim::monte_carlo(s);
  ASSERT_EQ(pts.size(), s.schemes.size() * s.snr_db.size());
  for (const auto &p : pts) {
    EXPECT_EQ(p.trials, 50u);
    EXPECT_EQ(p.data_symbols, 50u * 28u);
    EXPECT_DOUBLE_EQ(p.ser, static_cast<double>(p.symbol_errors) / static_cast<double>(p.data_symbols));
    EXPECT_EQ(p.K, 4);
    EXPECT_EQ(p.M, 8);
    EXPECT_EQ(p.filter, p.scheme == "ofdm" ? "none" : "dirichlet");
    EXPECT_GE(p.mse, 0.0);
  }
  // conventional pilots carry the reference verbatim: Es per pilot
  EXPECT_NEAR(find(pts, "conventional", 0.0).pilot_energy_avg, 1.0, 1e-12);
  EXPECT_NEAR(find(pts, "genie", 0.0).pilot_energy_avg, 1.0, 1e-12);
  EXPECT_EQ(find(pts, "genie", 0.0).mse, 0.0);
  EXPECT_GT(find(pts, "proposed", 0.0).pilot_energy_avg, 1.0);
}

TEST(MonteCarlo, IdenticalAcrossWorkerCounts) {
  ExperimentSpec s = small_spec();
  const auto one = sim::monte_carlo(s);
  for (unsigned w : {2u, 3u, 8u}) {
    s.workers = w;
    const auto many = sim::monte_carlo(s);
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      EXPECT_EQ(one[i].mse, many[i].mse);
      EXPECT_EQ(one[i].symbol_errors, many[i].symbol_errors);
      EXPECT_EQ(one[i].pilot_energy_avg, many[i].pilot_energy_avg);
    }
  }
}

TEST(MonteCarlo, SeedChangesResults) {
  ExperimentSpec s = small_spec();
  s.schemes = {SimScheme::Conventional};
  const auto a = sim::monte_carlo(s);
  s.seed = 2;
  const auto b = sim::monte_carlo(s);
  EXPECT_NE(a[0].mse, b[0].mse);
}

TEST(MonteCarlo, EstimationErrorFallsWithSnr) {
  ExperimentSpec s = small_spec();
  s.n_h = 40;
  const auto pts = sim::monte_carlo(s);
  for (const char *scheme : {"conventional", "proposed", "ofdm", "ls"})
    for (std::size_t i = 1; i < s.snr_db.size(); ++i)
      EXPECT_LE(find(pts, scheme, s.snr_db[i]).mse, find(pts, scheme, s.snr_db[i - 1]).mse)
          << scheme << " " << s.snr_db[i];
  for (std::size_t i = 0; i < s.snr_db.size(); ++i)
    EXPECT_LE(find(pts, "genie", s.snr_db[i]).ser, find(pts, "conventional", s.snr_db[i]).ser + 0.02);
}

TEST(MonteCarlo, RaisedCosineRuns) {
  ExperimentSpec s = small_spec();
  s.gfdm.filter = FilterSpec::raised_cosine(0.5);
  s.snr_db = {40.0};
  const auto pts = sim::monte_carlo(s);
  EXPECT_EQ(find(pts, "proposed", 40.0).filter, "rc");
  EXPECT_LT(find(pts, "genie", 40.0).ser, 0.01);
}
