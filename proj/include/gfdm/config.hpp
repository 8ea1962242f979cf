#pragma once

// Flat key = value experiment files. '#' starts a comment; list values are
// comma separated; an SNR grid may also be written start:step:stop.
//
//   K = 8
//   M = 128
//   L = 16
//   filter = dirichlet        # or rc
//   alpha = 0.9               # rc only
//   schemes = genie,conventional,proposed,ofdm
//   snr_db = 0:5:40
//   N_h = 100
//   N_d = 100
//   Es = 1
//   seed = 1
//   out_path = curves.csv

#include <gfdm/sim.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gfdm {

struct RunConfig {
  ExperimentSpec spec;
  std::string out_path;
};

namespace config {

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string &key, const std::string &v) {
  if (v == "inf" || v == "+inf")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size())
      return x;
  } catch (const std::exception &) {
  }
  throw ConfigError("key '" + key + "': '" + v + "' is not a number");
}

inline long long to_int(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size())
      return x;
  } catch (const std::exception &) {
  }
  throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
}

inline std::uint64_t to_u64(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used == v.size() && v.front() != '-')
      return x;
  } catch (const std::exception &) {
  }
  throw ConfigError("key '" + key + "': '" + v + "' is not an unsigned integer");
}

inline std::vector<Index> to_index_list(const std::string &key, const std::string &v) {
  std::vector<Index> out;
  for (const auto &item : split(v, ','))
    out.push_back(static_cast<Index>(to_int(key, item)));
  return out;
}

inline std::vector<double> to_snr_grid(const std::string &key, const std::string &v) {
  const auto range = split(v, ':');
  if (range.size() == 3) {
    const double start = to_double(key, range[0]), step = to_double(key, range[1]),
                 stop = to_double(key, range[2]);
    if (!(step > 0.0))
      throw ConfigError("key '" + key + "': range step must be positive");
    std::vector<double> out;
    for (int i = 0;; ++i) {
      const double x = start + i * step;
      if (x > stop + 1e-9 * std::abs(step))
        break;
      out.push_back(x);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto &item : split(v, ','))
    out.push_back(to_double(key, item));
  return out;
}

} // namespace detail

/// Parses the key/value text; unknown keys are rejected.
inline RunConfig parse(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  RunConfig rc;
  ExperimentSpec &s = rc.spec;
  Index K = 8, M = 128, L = 16;
  std::string filter = "dirichlet";
  std::optional<double> alpha;
  for (const auto &[key, value] : kv) {
    if (key == "K")
      K = static_cast<Index>(detail::to_int(key, value));
    else if (key == "M")
      M = static_cast<Index>(detail::to_int(key, value));
    else if (key == "L")
      L = static_cast<Index>(detail::to_int(key, value));
    else if (key == "N")
      s.taps = static_cast<Index>(detail::to_int(key, value));
    else if (key == "filter")
      filter = value;
    else if (key == "alpha")
      alpha = detail::to_double(key, value);
    else if (key == "schemes") {
      s.schemes.clear();
      for (const auto &name : detail::split(value, ','))
        s.schemes.push_back(parse_scheme(name));
    } else if (key == "snr_db")
      s.snr_db = detail::to_snr_grid(key, value);
    else if (key == "N_h")
      s.n_h = static_cast<Index>(detail::to_int(key, value));
    else if (key == "N_d")
      s.n_d = static_cast<Index>(detail::to_int(key, value));
    else if (key == "Es")
      s.es = detail::to_double(key, value);
    else if (key == "seed")
      s.seed = detail::to_u64(key, value);
    else if (key == "ref_seed")
      s.ref_seed = detail::to_u64(key, value);
    else if (key == "pilot_positions")
      s.pilot_positions = detail::to_index_list(key, value);
    else if (key == "bins")
      s.bins = detail::to_index_list(key, value);
    else if (key == "workers") {
      const long long w = detail::to_int(key, value);
      if (w < 1 || w > 1024)
        throw ConfigError("workers must be in 1..1024");
      s.workers = static_cast<unsigned>(w);
    }
    else if (key == "out_path")
      rc.out_path = value;
    else
      throw ConfigError("unknown key '" + key + "'");
  }

  FilterSpec fs;
  if (filter == "dirichlet") {
    if (alpha)
      throw ConfigError("alpha is only valid with filter = rc");
    fs = FilterSpec::dirichlet();
  } else if (filter == "rc") {
    fs = FilterSpec::raised_cosine(alpha.value_or(0.9));
  } else {
    throw ConfigError("unknown filter '" + filter + "' (expected dirichlet or rc)");
  }
  try {
    if (K < 1 || M < 1 || L < 0)
      throw ConfigError("K, M must be >= 1 and L >= 0");
    s.gfdm = GfdmConfig::full(K, M, L, fs);
    s.validate();
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
  return rc;
}

inline RunConfig parse_string(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

inline RunConfig load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

} // namespace config
} // namespace gfdm
