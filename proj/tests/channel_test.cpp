#include <gfdm/channel.hpp>
#include <gfdm/modem.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace gfdm;

TEST(ExponentialPdp, SingleTap) {
  const PowerDelayProfile pdp = channel::exponential_pdp(1);
  ASSERT_EQ(pdp.taps(), 1);
  EXPECT_DOUBLE_EQ(pdp.p[0], 1.0);
}

TEST(ExponentialPdp, TwoTaps) {
  const PowerDelayProfile pdp = channel::exponential_pdp(2);
  EXPECT_NEAR(pdp.p[0], 10.0 / 11.0, 1e-15);
  EXPECT_NEAR(pdp.p[1], 1.0 / 11.0, 1e-15);
}

TEST(ExponentialPdp, EndpointsTenDecibelsApart) {
  for (Index n : {2, 8, 16}) {
    const PowerDelayProfile pdp = channel::exponential_pdp(n);
    EXPECT_NEAR(pdp.p.back() / pdp.p.front(), 0.1, 1e-12);
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      sum += pdp.p[static_cast<std::size_t>(i)];
      if (i > 0) { // log-linear: constant ratio between neighbours
        EXPECT_NEAR(pdp.p[static_cast<std::size_t>(i)] / pdp.p[static_cast<std::size_t>(i - 1)],
                    std::pow(10.0, -1.0 / static_cast<double>(n - 1)), 1e-12);
      }
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ExponentialPdp, ZeroTapsRejected) { EXPECT_THROW(channel::exponential_pdp(0), InvalidParameter); }

TEST(DrawChannel, ForcedUnitDraw) {
  ComplexVector q(1);
  q << 1.0;
  const ChannelRealization ch = channel::draw_channel(channel::exponential_pdp(1), q);
  EXPECT_EQ(ch.h, q);
}

TEST(DrawChannel, DeterministicPerSeed) {
  const PowerDelayProfile pdp = channel::exponential_pdp(8);
  std::mt19937_64 a(99), b(99);
  EXPECT_EQ(channel::draw_channel(pdp, a).h, channel::draw_channel(pdp, b).h);
}

TEST(DrawChannel, MeanEnergyMatchesUnitProfile) {
  const PowerDelayProfile pdp = channel::exponential_pdp(8);
  std::mt19937_64 rng(1);
  double acc = 0.0, re2 = 0.0, im2 = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const ComplexVector h = channel::draw_channel(pdp, rng).h;
    acc += h.squaredNorm();
    re2 += h(0).real() * h(0).real();
    im2 += h(0).imag() * h(0).imag();
  }
  EXPECT_NEAR(acc / n, 1.0, 0.03);
  // circular symmetry: power split evenly between the quadratures
  EXPECT_NEAR(re2 / n, pdp.p[0] / 2.0, 0.03 * pdp.p[0]);
  EXPECT_NEAR(im2 / n, pdp.p[0] / 2.0, 0.03 * pdp.p[0]);
}

TEST(ApplyChannel, IdentityNoiseless) {
  std::mt19937_64 rng(3);
  const ComplexVector x = complex_normal_vector(16, rng);
  ChannelRealization ch{ComplexVector::Ones(1)};
  EXPECT_EQ(channel::apply_channel(ch, x, NoiseSpec{0.0}, rng), x);
}

TEST(ApplyChannel, UnitDelayShiftsCyclically) {
  std::mt19937_64 rng(3);
  const ComplexVector x = complex_normal_vector(8, rng);
  ChannelRealization ch{ComplexVector::Zero(3)};
  ch.h(1) = 1.0;
  const ComplexVector y = channel::apply_channel(ch, x, NoiseSpec{0.0}, rng);
  for (Index n = 0; n < 8; ++n)
    EXPECT_EQ(y((n + 1) % 8), x(n));
}

TEST(ApplyChannel, TooManyTapsRejected) {
  std::mt19937_64 rng(3);
  ChannelRealization ch{ComplexVector::Ones(9)};
  EXPECT_THROW(channel::apply_channel(ch, ComplexVector::Ones(8), NoiseSpec{0.0}, rng), InvalidDimension);
}

TEST(ApplyChannel, MatchesCirculantMatrix) {
  std::mt19937_64 rng(5);
  const ComplexVector h = complex_normal_vector(5, rng);
  const ComplexVector x = complex_normal_vector(32, rng);
  EXPECT_LE((channel::circular_convolve(h, x) - numerics::circulant(h, 32) * x).norm(), 1e-12);
}

// Time-domain circulant against the diagonalized frequency form, both filters.
TEST(ApplyChannel, DualFormEquivalence) {
  std::mt19937_64 rng(17);
  const PowerDelayProfile pdp = channel::exponential_pdp(8);
  for (const FilterSpec &f : {FilterSpec::dirichlet(), FilterSpec::raised_cosine(0.9)}) {
    const TransmitterMatrix tm = modem::transmitter_matrix(GfdmConfig::full(8, 128, 16, f));
    const Index D = tm.D();
    const ComplexMatrix w = numerics::dft_matrix(D);
    const ComplexMatrix fn = numerics::partial_fourier(D, 8);
    for (int i = 0; i < 3; ++i) {
      const ComplexVector d = complex_normal_vector(D, rng);
      const ChannelRealization ch = channel::draw_channel(pdp, rng);
      const ComplexVector y = channel::apply_channel(ch, tm.A * d, NoiseSpec{0.0}, rng);
      const ComplexVector wad = w * (tm.A * d);
      const ComplexVector freq = w.adjoint() * wad.asDiagonal() * (fn * ch.h);
      EXPECT_LE((y - freq).norm(), 1e-9 * y.norm());
    }
  }
}

TEST(ApplyChannel, EmpiricalNoisePower) {
  std::mt19937_64 rng(21);
  const double n0 = 0.37;
  ChannelRealization ch{ComplexVector::Ones(1)};
  const ComplexVector x = ComplexVector::Zero(100000);
  const ComplexVector w = channel::apply_channel(ch, x, NoiseSpec{n0}, rng);
  EXPECT_NEAR(w.squaredNorm() / 100000.0, n0, 0.03 * n0);
  EXPECT_NEAR(NoiseSpec::from_snr_db(10.0).n0, 0.1, 1e-15);
  EXPECT_NEAR(NoiseSpec::from_snr_db(0.0, 2.0).n0, 2.0, 1e-15);
}

TEST(ApplyChannel, CyclicPrefixAbsorbsLinearConvolution) {
  std::mt19937_64 rng(8);
  const Index D = 64, L = 16;
  const ComplexVector x = complex_normal_vector(D, rng);
  for (Index n = 1; n <= L + 1; ++n) {
    const ComplexVector h = complex_normal_vector(n, rng);
    const ComplexVector rx = channel::linear_convolve(h, modem::add_cp(x, L));
    const ComplexVector y = modem::remove_cp(rx.head(D + L), L);
    EXPECT_LE((y - numerics::circulant(h, D) * x).cwiseAbs().maxCoeff(), 1e-12) << "N=" << n;
  }
}

TEST(FrequencyResponse, MatchesPartialFourier) {
  std::mt19937_64 rng(4);
  const ComplexVector h = complex_normal_vector(6, rng);
  EXPECT_LE((channel::frequency_response(h, 48) - numerics::partial_fourier(48, 6) * h).norm(), 1e-12);
}
