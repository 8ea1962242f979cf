// gfdm_sim: Monte Carlo runs, plotting and self-checks.
//
// Exit codes: 0 success, 1 configuration or input error, 2 numerical failure.

#include <gfdm/checks.hpp>
#include <gfdm/config.hpp>
#include <gfdm/report.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace gfdm;

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2 };

int write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kConfig;
  }
  out << text;
  out.close();
  if (!out) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return kConfig;
  }
  return kOk;
}

int cmd_run(const std::string &config_path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
            std::optional<unsigned> workers) {
  RunConfig rc = config::load(config_path);
  if (seed)
    rc.spec.seed = *seed;
  if (workers)
    rc.spec.workers = *workers;
  if (out)
    rc.out_path = *out;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CurvePoint> points = sim::monte_carlo(rc.spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string csv = report::to_csv(points);
  std::cerr << "gfdm_sim: " << points.size() << " points, " << rc.spec.n_h * rc.spec.n_d
            << " trials each, " << secs << " s\n";
  if (rc.out_path.empty() || rc.out_path == "-") {
    std::cout << csv;
    return kOk;
  }
  return write_text(rc.out_path, csv);
}

int cmd_plot(const std::string &in_path, const std::string &out_path, const std::string &metric) {
  std::ifstream in(in_path);
  if (!in)
    throw ConfigError("cannot open '" + in_path + "'");
  const std::vector<CurvePoint> points = report::read_csv(in);
  return write_text(out_path, report::render_svg(points, metric == "mse" ? report::Metric::Mse : report::Metric::Ser));
}

int cmd_validate(const std::string &config_path, Index oracle_samples) {
  const RunConfig rc = config::load(config_path);
  bool ok = true;
  for (const auto &r : checks::validate_experiment(rc.spec, oracle_samples)) {
    std::printf("%s  %-60s value=%.3e threshold=%.1e%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value,
                r.threshold, r.detail.empty() ? "" : "  ", r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? kOk : kNumerical;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"GFDM pilot-design channel estimation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  auto *run = app.add_subcommand("run", "Monte Carlo simulation, CSV output");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--seed", seed, "master seed (overrides config)");
  run->add_option("--out", out, "CSV path (overrides config; '-' for stdout)");
  run->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));

  std::string in_path, svg_path, metric;
  auto *plot = app.add_subcommand("plot", "log-y SVG chart from a CSV");
  plot->add_option("--in", in_path, "CSV produced by run")->required();
  plot->add_option("--out", svg_path, "SVG path")->required();
  plot->add_option("--metric", metric, "mse or ser")->required()->check(CLI::IsMember({"mse", "ser"}));

  Index oracle_samples = 20000;
  std::string validate_config;
  auto *validate = app.add_subcommand("validate", "numerical self-checks on the configured geometry");
  validate->add_option("--config", validate_config, "key=value config file")->required();
  validate->add_option("--oracle-samples", oracle_samples, "Monte Carlo samples for the covariance oracle (0 skips)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run)
      return cmd_run(config_path, seed, out, workers);
    if (*plot)
      return cmd_plot(in_path, svg_path, metric);
    return cmd_validate(validate_config, oracle_samples);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
