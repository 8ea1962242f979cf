#pragma once

// CSV curve files and a dependency-free SVG line chart.

#include <gfdm/sim.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gfdm::report {

inline constexpr const char *kCsvHeader = "scheme,filter,K,M,snr_db,mse,ser,pilot_energy_avg,trials";

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

} // namespace detail

inline void write_csv(std::ostream &out, const std::vector<CurvePoint> &points) {
  out << kCsvHeader << '\n';
  for (const auto &p : points)
    out << p.scheme << ',' << p.filter << ',' << p.K << ',' << p.M << ',' << detail::fmt(p.snr_db)
        << ',' << detail::fmt(p.mse) << ',' << detail::fmt(p.ser) << ','
        << detail::fmt(p.pilot_energy_avg) << ',' << p.trials << '\n';
}

inline std::string to_csv(const std::vector<CurvePoint> &points) {
  std::ostringstream s;
  write_csv(s, points);
  return s.str();
}

inline std::vector<CurvePoint> read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ConfigError("CSV header does not match '" + std::string(kCsvHeader) + "'");
  std::vector<CurvePoint> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ','))
      f.push_back(item);
    if (f.size() != 9)
      throw ConfigError("CSV line " + std::to_string(lineno) + ": expected 9 fields");
    try {
      CurvePoint p;
      p.scheme = f[0];
      p.filter = f[1];
      p.K = std::stol(f[2]);
      p.M = std::stol(f[3]);
      p.snr_db = std::stod(f[4]);
      p.mse = std::stod(f[5]);
      p.ser = std::stod(f[6]);
      p.pilot_energy_avg = std::stod(f[7]);
      p.trials = std::stoull(f[8]);
      out.push_back(p);
    } catch (const std::exception &) {
      throw ConfigError("CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

enum class Metric { Mse, Ser };

/// Log-y line chart, one series per (scheme, filter, K, M). Non-positive
/// values have no place on a log axis and are skipped.
inline std::string render_svg(const std::vector<CurvePoint> &points, Metric metric) {
  constexpr double W = 720, H = 480, left = 80, right = 200, top = 30, bottom = 60;
  const auto value = [&](const CurvePoint &p) { return metric == Metric::Mse ? p.mse : p.ser; };

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto &p : points) {
    const double v = value(p);
    if (!(v > 0.0) || !std::isfinite(p.snr_db))
      continue;
    const std::string name = p.scheme + " (" + p.filter + ", K=" + std::to_string(p.K) +
                             ", M=" + std::to_string(p.M) + ")";
    series[name].emplace_back(p.snr_db, v);
    xmin = std::min(xmin, p.snr_db);
    xmax = std::max(xmax, p.snr_db);
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double pw = W - left - right, ph = H - top - bottom;
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string ylabel = metric == Metric::Mse ? "Channel MSE" : "SER";
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  s << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << top + ph / 2 << ")\">" << ylabel << "</text>\n";
  if (series.empty()) {
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << top + ph / 2
      << "\" text-anchor=\"middle\">no positive data</text>\n</svg>\n";
    return s.str();
  }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  const double lo = std::floor(std::log10(ymin)), hi = std::max(lo + 1, std::ceil(std::log10(ymax)));
  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return top + (hi - std::log10(y)) / (hi - lo) * ph; };

  for (double e = lo; e <= hi; e += 1) {
    const double y = top + (hi - e) / (hi - lo) * ph;
    s << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
      << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  std::vector<double> xs;
  for (const auto &[_, pts] : series)
    for (const auto &pt : pts)
      xs.push_back(pt.first);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs)
    s << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
      << detail::fmt(x) << "</text>\n";

  static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::size_t i = 0;
  for (auto &[name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char *c = colors[i % std::size(colors)];
    s << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (const auto &[x, y] : pts)
      s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
    for (const auto &[x, y] : pts)
      s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    const double ly = top + 10 + 18 * static_cast<double>(i);
    s << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 30
      << "\" y2=\"" << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - right + 35 << "\" y=\"" << ly + 4 << "\" font-size=\"10\">" << name
      << "</text>\n";
    ++i;
  }
  s << "</svg>\n";
  return s.str();
}

} // namespace gfdm::report
