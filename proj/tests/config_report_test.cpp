#include <gfdm/config.hpp>
#include <gfdm/report.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

using namespace gfdm;

TEST(ConfigParse, DefaultsFromEmptyText) {
  const RunConfig rc = config::parse_string("# nothing here\n\n");
  EXPECT_EQ(rc.spec.gfdm.K, 8);
  EXPECT_EQ(rc.spec.gfdm.M, 128);
  EXPECT_EQ(rc.spec.gfdm.L, 16);
  EXPECT_EQ(rc.spec.gfdm.filter.kind, FilterKind::Dirichlet);
  EXPECT_EQ(rc.spec.snr_db.size(), 9u);
  EXPECT_EQ(rc.spec.n_h, 100);
  EXPECT_EQ(rc.spec.seed, 1u);
  EXPECT_TRUE(rc.out_path.empty());
}

TEST(ConfigParse, AllKeys) {
  const RunConfig rc = config::parse_string(R"(
K = 16
M = 64     # subsymbols
L = 16
N = 12
filter = rc
alpha = 0.5
schemes = genie,proposed,ls
snr_db = 0, 10, 20
N_h = 7
N_d = 3
Es = 2
seed = 12345678901234
ref_seed = 3
workers = 4
out_path = results/out.csv
)");
  const ExperimentSpec &s = rc.spec;
  EXPECT_EQ(s.gfdm.K, 16);
  EXPECT_EQ(s.gfdm.M, 64);
  EXPECT_EQ(s.channel_taps(), 12);
  EXPECT_EQ(s.gfdm.filter.kind, FilterKind::RaisedCosine);
  EXPECT_DOUBLE_EQ(*s.gfdm.filter.rolloff, 0.5);
  EXPECT_EQ(s.schemes, (std::vector<SimScheme>{SimScheme::Genie, SimScheme::Proposed, SimScheme::Ls}));
  EXPECT_EQ(s.snr_db, (std::vector<double>{0.0, 10.0, 20.0}));
  EXPECT_EQ(s.n_h, 7);
  EXPECT_EQ(s.n_d, 3);
  EXPECT_DOUBLE_EQ(s.es, 2.0);
  EXPECT_EQ(s.seed, 12345678901234u);
  EXPECT_EQ(s.ref_seed, 3u);
  EXPECT_EQ(s.workers, 4u);
  EXPECT_EQ(rc.out_path, "results/out.csv");
}

TEST(ConfigParse, RangeAndInfinity) {
  EXPECT_EQ(config::parse_string("snr_db = 0:5:20").spec.snr_db, (std::vector<double>{0, 5, 10, 15, 20}));
  EXPECT_EQ(config::parse_string("snr_db = -10:10:15").spec.snr_db, (std::vector<double>{-10, 0, 10}));
  const auto grid = config::parse_string("snr_db = 30, inf").spec.snr_db;
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(grid[1], std::numeric_limits<double>::infinity());
}

TEST(ConfigParse, RcDefaultsRolloff) {
  EXPECT_DOUBLE_EQ(*config::parse_string("filter = rc").spec.gfdm.filter.rolloff, 0.9);
}

TEST(ConfigParse, ExplicitPilotsAndBins) {
  const RunConfig rc = config::parse_string("K=4\nM=8\nL=4\npilot_positions=0,9,18,27\nbins=0,8,16,24\n");
  EXPECT_EQ(rc.spec.pilot_positions, (std::vector<Index>{0, 9, 18, 27}));
  EXPECT_EQ(rc.spec.bins, (std::vector<Index>{0, 8, 16, 24}));
}

TEST(ConfigParse, Errors) {
  for (const char *text : {"K = 8\nK = 8", "bogus = 1", "K 8", "K = ", "K = eight", "K = 0", "M = -2",
                           "filter = gaussian", "alpha = 0.5", "filter = rc\nalpha = 2", "schemes = mmse",
                           "snr_db = 10, 5", "snr_db = 0:0:10", "N_h = 0", "Es = 0", "seed = -1",
                           "N = 20", "workers = 0", "L = -1", "K = 8.5"}) {
    EXPECT_THROW(config::parse_string(text), ConfigError) << text;
  }
  EXPECT_THROW(config::load("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST(Csv, HeaderIsExact) {
  EXPECT_EQ(report::to_csv({}), "scheme,filter,K,M,snr_db,mse,ser,pilot_energy_avg,trials\n");
}

TEST(Csv, RoundTrip) {
  std::vector<CurvePoint> pts(2);
  pts[0] = {"proposed", "rc", 16, 64, 12.5, 1.234567890123e-5, 0.0125, 45.5, 10000};
  pts[1] = {"ofdm", "none", 8, 128, -5, 0.75, 0.5, 8, 1};
  const std::string text = report::to_csv(pts);
  EXPECT_NE(text.find("proposed,rc,16,64,12.5,1.23456789012e-05,0.0125,45.5,10000\n"), std::string::npos);
  std::istringstream in(text);
  const auto back = report::read_csv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].scheme, "proposed");
  EXPECT_EQ(back[0].filter, "rc");
  EXPECT_EQ(back[0].K, 16);
  EXPECT_EQ(back[0].M, 64);
  EXPECT_DOUBLE_EQ(back[0].snr_db, 12.5);
  EXPECT_NEAR(back[0].mse, 1.234567890123e-5, 1e-16);
  EXPECT_DOUBLE_EQ(back[1].snr_db, -5.0);
  EXPECT_EQ(back[0].trials, 10000u);
}

TEST(Csv, MalformedInputRejected) {
  std::istringstream bad_header("scheme,filter\n");
  EXPECT_THROW(report::read_csv(bad_header), ConfigError);
  std::istringstream short_row(std::string(report::kCsvHeader) + "\nproposed,rc,1\n");
  EXPECT_THROW(report::read_csv(short_row), ConfigError);
  std::istringstream bad_number(std::string(report::kCsvHeader) + "\nproposed,rc,x,64,0,1,1,1,1\n");
  EXPECT_THROW(report::read_csv(bad_number), ConfigError);
}

TEST(Svg, SeriesAndLogAxis) {
  std::vector<CurvePoint> pts;
  for (double snr : {0.0, 10.0, 20.0}) {
    pts.push_back({"conventional", "dirichlet", 8, 128, snr, 0.5 / (1 + snr), 0.1, 8, 10});
    pts.push_back({"proposed", "dirichlet", 8, 128, snr, 0.2 * std::pow(10.0, -snr / 10), 0.0, 30, 10});
  }
  const std::string mse = report::render_svg(pts, report::Metric::Mse);
  EXPECT_EQ(mse.rfind("<svg", 0), 0u);
  EXPECT_NE(mse.find("</svg>"), std::string::npos);
  EXPECT_NE(mse.find("Channel MSE"), std::string::npos);
  EXPECT_NE(mse.find("proposed (dirichlet, K=8, M=128)"), std::string::npos);
  EXPECT_NE(mse.find(">1e-3<"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = mse.find("<polyline"); pos != std::string::npos; pos = mse.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 2u);
  // SER of zero cannot sit on a log axis: the proposed series drops out
  const std::string ser = report::render_svg(pts, report::Metric::Ser);
  EXPECT_EQ(ser.find("proposed"), std::string::npos);
  EXPECT_NE(ser.find("SER"), std::string::npos);
}

TEST(Svg, EmptyInput) {
  const std::string s = report::render_svg({}, report::Metric::Ser);
  EXPECT_NE(s.find("no positive data"), std::string::npos);
}

TEST(ShippedConfigs, AllParse) {
  int seen = 0;
  for (const auto &entry : std::filesystem::directory_iterator(GFDM_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg")
      continue;
    ++seen;
    EXPECT_NO_THROW(config::load(entry.path().string())) << entry.path();
  }
  EXPECT_GE(seen, 1);
}
