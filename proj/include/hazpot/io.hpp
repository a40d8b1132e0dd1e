#pragma once

// File formats of the CLI surface: marker CSV input, survival-curve CSV
// output, the posterior text artifact, and the run-manifest sidecar.
// All floats are written with %.17g so files round-trip bit exactly.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hazpot/errors.hpp"
#include "hazpot/inference.hpp"

#include "json.hpp"

namespace hazpot {

inline constexpr const char* kArtifactVersion = "0.1.0";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tabulated t -> P(T > t); std_err is present only for Monte Carlo outputs.
struct SurvivalCurve {
  std::vector<double> t;
  std::vector<double> survival;
  std::vector<double> std_err;  // empty for closed-form curves
};

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline double parse_field(const std::string& field, const std::string& path,
                          std::size_t row) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw data_error(path + ": row " + std::to_string(row) +
                     ": not a number: '" + field + "'");
  }
  while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
  if (pos != field.size())
    throw data_error(path + ": row " + std::to_string(row) +
                     ": trailing junk in field '" + field + "'");
  return v;
}

}  // namespace detail

// Marker CSV: header `time,value`, one observation per row, strictly
// increasing positive times.  Z(0)=0 is implicit; a t=0 row is rejected.
inline MarkerSeries read_marker_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line))
    throw data_error(path + ": empty file (header `time,value` required)");
  if (detail::strip_cr(line) != "time,value")
    throw data_error(path + ": first line must be the header `time,value`");

  std::vector<double> times, values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw data_error(path + ": row " + std::to_string(row) +
                       ": expected `time,value`");
    const double t = detail::parse_field(line.substr(0, comma), path, row);
    const double z = detail::parse_field(line.substr(comma + 1), path, row);
    if (t == 0.0)
      throw data_error(path + ": row " + std::to_string(row) +
                       ": Z(0)=0 is implicit and must not appear as a row");
    if (!times.empty() && !(t > times.back()))
      throw data_error(path + ": row " + std::to_string(row) +
                       ": times must be strictly increasing");
    if (!(t > 0.0))
      throw data_error(path + ": row " + std::to_string(row) +
                       ": times must be positive");
    times.push_back(t);
    values.push_back(z);
  }
  if (times.empty()) throw data_error(path + ": no observations");
  return MarkerSeries(std::move(times), std::move(values));
}

inline void write_survival_csv(const std::string& path,
                               const SurvivalCurve& curve) {
  const bool mc = !curve.std_err.empty();
  if (curve.survival.size() != curve.t.size() ||
      (mc && curve.std_err.size() != curve.t.size()))
    throw domain_error(path + ": survival curve columns disagree in length");
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    if (i > 0 && !(curve.t[i] > curve.t[i - 1]))
      throw domain_error(path + ": curve times must strictly increase");
    // closed-form curves must be nonincreasing up to numerical noise
    if (!mc && i > 0 && curve.survival[i] > curve.survival[i - 1] + 1e-9)
      throw numeric_error(path + ": closed-form survival curve increased",
                          curve.survival[i], 0.0);
  }
  std::ofstream out(path);
  if (!out) throw data_error(path + ": cannot open for writing");
  out << (mc ? "t,survival,std_err\n" : "t,survival\n");
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    out << format_double(curve.t[i]) << ',' << format_double(curve.survival[i]);
    if (mc) out << ',' << format_double(curve.std_err[i]);
    out << '\n';
  }
  if (!out) throw data_error(path + ": write failed");
}

inline void write_columns_csv(const std::string& path,
                              const std::vector<std::string>& header,
                              const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw data_error(path + ": cannot open for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? ',' : '\n');
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << format_double(columns[c][r]) << (c + 1 < columns.size() ? ',' : '\n');
  }
  if (!out) throw data_error(path + ": write failed");
}

// --- posterior artifact ---------------------------------------------------
//
// Line-oriented text schema (space separated, one keyword per line):
//   hazpot-posterior 1
//   t_k <v> / z_k <v> / shift <v>
//   n_eta <n> / n_sigma2 <m>
//   eta_edges <n+1 values> / sigma2_edges <m+1 values>
//   eta_nodes <n values>  / sigma2_nodes <m values>
//   log_weights followed by n lines of m values
// Weights are stored normalized.

struct PosteriorArtifact {
  PosteriorGrid grid;
  double t_k = 0.0;
  double z_k = 0.0;
  double shift = 0.0;
};

inline void write_posterior_artifact(const std::string& path,
                                     const PosteriorArtifact& a) {
  if (!a.grid.normalized)
    throw domain_error("write_posterior_artifact: grid must be normalized");
  std::ofstream out(path);
  if (!out) throw data_error(path + ": cannot open for writing");
  out << "hazpot-posterior 1\n";
  out << "t_k " << format_double(a.t_k) << "\n";
  out << "z_k " << format_double(a.z_k) << "\n";
  out << "shift " << format_double(a.shift) << "\n";
  out << "n_eta " << a.grid.n_eta() << "\n";
  out << "n_sigma2 " << a.grid.n_sigma2() << "\n";
  auto write_row = [&out](const char* key, const std::vector<double>& v) {
    out << key;
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
  };
  write_row("eta_edges", a.grid.eta_edges);
  write_row("sigma2_edges", a.grid.sigma2_edges);
  write_row("eta_nodes", a.grid.eta_nodes);
  write_row("sigma2_nodes", a.grid.sigma2_nodes);
  out << "log_weights\n";
  for (std::size_t i = 0; i < a.grid.n_eta(); ++i) {
    for (std::size_t j = 0; j < a.grid.n_sigma2(); ++j)
      out << (j ? " " : "")
          << format_double(a.grid.log_weights[i * a.grid.n_sigma2() + j]);
    out << '\n';
  }
  out << "summary eta_mean " << format_double(a.grid.eta_mean())
      << " eta_mode " << format_double(a.grid.eta_mode()) << " sigma2_mean "
      << format_double(a.grid.sigma2_mean()) << " sigma2_mode "
      << format_double(a.grid.sigma2_mode()) << " shift "
      << format_double(a.shift) << '\n';
  if (!out) throw data_error(path + ": write failed");
}

namespace detail {

inline std::vector<double> parse_doubles(std::istringstream& ss,
                                         std::size_t n, const std::string& path,
                                         const std::string& what) {
  std::vector<double> v;
  v.reserve(n);
  double x;
  while (v.size() < n && ss >> x) v.push_back(x);
  if (v.size() != n)
    throw data_error(path + ": corrupt posterior artifact (" + what + ")");
  return v;
}

inline std::istringstream expect_line(std::ifstream& in, const std::string& key,
                                      const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw data_error(path + ": corrupt posterior artifact (missing " + key + ")");
  std::istringstream ss(strip_cr(line));
  std::string head;
  ss >> head;
  if (head != key)
    throw data_error(path + ": corrupt posterior artifact (expected " + key +
                     ", found " + head + ")");
  return ss;
}

}  // namespace detail

inline PosteriorArtifact read_posterior_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) ||
      detail::strip_cr(line) != "hazpot-posterior 1")
    throw data_error(path + ": not a hazpot-posterior v1 artifact");

  PosteriorArtifact a;
  {
    auto ss = detail::expect_line(in, "t_k", path);
    if (!(ss >> a.t_k)) throw data_error(path + ": corrupt t_k");
  }
  {
    auto ss = detail::expect_line(in, "z_k", path);
    if (!(ss >> a.z_k)) throw data_error(path + ": corrupt z_k");
  }
  {
    auto ss = detail::expect_line(in, "shift", path);
    if (!(ss >> a.shift)) throw data_error(path + ": corrupt shift");
  }
  std::size_t n_eta = 0, n_sigma2 = 0;
  {
    auto ss = detail::expect_line(in, "n_eta", path);
    if (!(ss >> n_eta) || n_eta < 1) throw data_error(path + ": corrupt n_eta");
  }
  {
    auto ss = detail::expect_line(in, "n_sigma2", path);
    if (!(ss >> n_sigma2) || n_sigma2 < 1)
      throw data_error(path + ": corrupt n_sigma2");
  }
  {
    auto ss = detail::expect_line(in, "eta_edges", path);
    a.grid.eta_edges = detail::parse_doubles(ss, n_eta + 1, path, "eta_edges");
  }
  {
    auto ss = detail::expect_line(in, "sigma2_edges", path);
    a.grid.sigma2_edges =
        detail::parse_doubles(ss, n_sigma2 + 1, path, "sigma2_edges");
  }
  {
    auto ss = detail::expect_line(in, "eta_nodes", path);
    a.grid.eta_nodes = detail::parse_doubles(ss, n_eta, path, "eta_nodes");
  }
  {
    auto ss = detail::expect_line(in, "sigma2_nodes", path);
    a.grid.sigma2_nodes =
        detail::parse_doubles(ss, n_sigma2, path, "sigma2_nodes");
  }
  if (!std::getline(in, line) || detail::strip_cr(line) != "log_weights")
    throw data_error(path + ": corrupt posterior artifact (log_weights)");
  a.grid.log_weights.reserve(n_eta * n_sigma2);
  for (std::size_t i = 0; i < n_eta; ++i) {
    if (!std::getline(in, line))
      throw data_error(path + ": corrupt posterior artifact (weight rows)");
    std::istringstream ss(detail::strip_cr(line));
    const auto row = detail::parse_doubles(ss, n_sigma2, path, "weight row");
    a.grid.log_weights.insert(a.grid.log_weights.end(), row.begin(), row.end());
  }
  a.grid.normalized = true;
  const double total = a.grid.total_mass();
  if (!(std::fabs(total - 1.0) <= 1e-8))
    throw data_error(path + ": posterior artifact weights are not normalized");
  return a;
}

// --- run manifest ----------------------------------------------------------

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string artifact_version = kArtifactVersion;
  std::string timestamp_utc;  // filled at write time when empty
};

inline std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline void write_manifest(const std::string& path, RunManifest m) {
  if (m.timestamp_utc.empty()) m.timestamp_utc = utc_timestamp_now();
  nlohmann::json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["artifact_version"] = m.artifact_version;
  j["timestamp"] = m.timestamp_utc;
  std::ofstream out(path);
  if (!out) throw data_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw data_error(path + ": write failed");
}

}  // namespace hazpot
