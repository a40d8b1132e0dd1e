// hazpot CLI: survival-curve evaluation, Monte Carlo simulation, posterior
// fitting from marker data, residual-life prediction, and the IG-mixture
// figure data.  Every output file gets a JSON manifest sidecar
// (<out>.manifest.json); identical flags and seed reproduce identical
// numeric output byte for byte.
//
// Exit status: 0 success, 2 usage error, 3 data error, 4 numeric error.

#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hazpot/distcore.hpp"
#include "hazpot/errors.hpp"
#include "hazpot/inference.hpp"
#include "hazpot/io.hpp"
#include "hazpot/pathsim.hpp"
#include "hazpot/riskmodels.hpp"

namespace {

using namespace hazpot;

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw domain_error(what + ": cannot parse '" + s + "'");
  }
}

// "start:stop:step" (inclusive of stop up to rounding) or a single value.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const auto colon = text.find(':', from);
    parts.push_back(text.substr(from, colon - from));
    if (colon == std::string::npos) break;
    from = colon + 1;
  }
  if (parts.size() == 1) return {parse_number(parts[0], what)};
  if (parts.size() != 3)
    throw domain_error(what + ": expected <value> or <start:stop:step>");
  const double start = parse_number(parts[0], what);
  const double stop = parse_number(parts[1], what);
  const double step = parse_number(parts[2], what);
  if (!(step > 0.0) || !(stop >= start))
    throw domain_error(what + ": need stop >= start and step > 0");
  const auto n = static_cast<std::size_t>(
      std::floor((stop - start) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

HazardCurve parse_power_law(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw domain_error("--hazard: expected <c:p>, got '" + s + "'");
  return HazardCurve::power_law(parse_number(s.substr(0, colon), "--hazard c"),
                                parse_number(s.substr(colon + 1), "--hazard p"));
}

// Hazard table CSV: header `time,hazard`, knots from (0,0), nondecreasing.
HazardCurve read_hazard_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line))
    throw data_error(path + ": empty file (header `time,hazard` required)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time,hazard")
    throw data_error(path + ": first line must be the header `time,hazard`");
  std::vector<double> ts, hs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw data_error(path + ": row " + std::to_string(row) +
                       ": expected `time,hazard`");
    ts.push_back(parse_number(line.substr(0, comma), path));
    hs.push_back(parse_number(line.substr(comma + 1), path));
  }
  try {
    return HazardCurve::table(std::move(ts), std::move(hs));
  } catch (const domain_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw domain_error(msg);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Shared {
  std::uint64_t seed = 1;
  std::size_t paths = 10000;
  double dt = 1e-3;
  std::string out;
  bool quiet = false;
  unsigned threads = 0;  // 0 = hardware default
};

void note(const Shared& sh, const std::string& msg) {
  if (!sh.quiet) std::cout << msg << "\n";
}

// --- survival -------------------------------------------------------------

struct SurvivalArgs {
  std::string model;
  std::vector<std::string> hazards;
  std::vector<std::string> hazard_tables;
  double theta = 0.0;
  bool theta_set = false;
  double x = 0.0;
  bool x_set = false;
  double eta = 0.0;
  bool eta_set = false;
  double sigma2 = 0.0;
  bool sigma2_set = false;
  std::string t_grid;
};

int run_survival(const Shared& sh, const SurvivalArgs& a) {
  const std::vector<double> ts = parse_grid(a.t_grid, "--t-grid");
  for (double t : ts) require(t >= 0.0, "--t-grid: times must be >= 0");

  std::vector<HazardCurve> curves;
  for (const auto& s : a.hazards) curves.push_back(parse_power_law(s));
  for (const auto& p : a.hazard_tables) curves.push_back(read_hazard_table(p));

  RunManifest manifest;
  manifest.command = "survival";
  manifest.seed = sh.seed;
  manifest.parameters["model"] = a.model;
  for (std::size_t i = 0; i < a.hazards.size(); ++i)
    manifest.parameters["hazard." + std::to_string(i)] = a.hazards[i];
  for (std::size_t i = 0; i < a.hazard_tables.size(); ++i)
    manifest.parameters["hazard_table." + std::to_string(i)] =
        a.hazard_tables[i];
  manifest.parameters["t_grid"] = a.t_grid;

  if (a.model == "bounds") {
    require(!curves.empty(), "model=bounds needs at least one --hazard");
    std::vector<double> lower, upper;
    for (double t : ts) {
      const auto [lo, hi] = survival_bounds(curves, t);
      lower.push_back(lo);
      upper.push_back(hi);
    }
    write_columns_csv(sh.out, {"t", "lower", "upper"}, {ts, lower, upper});
    write_manifest(sh.out + ".manifest.json", manifest);
    note(sh, "wrote " + sh.out + " (" + std::to_string(ts.size()) + " rows)");
    return 0;
  }

  SurvivalCurve curve;
  curve.t = ts;
  if (a.model == "additive" || a.model == "maxrule") {
    require(!curves.empty(),
            "model=" + a.model + " needs at least one --hazard");
    for (double t : ts)
      curve.survival.push_back(a.model == "additive"
                                   ? additive_survival(curves, t)
                                   : max_rule_survival(curves, t));
  } else if (a.model == "gumbel") {
    require(curves.size() == 2, "model=gumbel needs exactly two hazard curves");
    require(a.theta_set, "model=gumbel needs --theta");
    const GumbelTheta theta(a.theta);
    manifest.parameters["theta"] = format_double(a.theta);
    for (double t : ts)
      curve.survival.push_back(gumbel_survival(curves[0], curves[1], theta, t));
  } else if (a.model == "trauma-closed") {
    for (double t : ts) curve.survival.push_back(trauma_gamma_closed(t));
  } else if (a.model == "ig") {
    require(a.x_set && a.eta_set && a.sigma2_set,
            "model=ig needs --x, --eta and --sigma2");
    const WienerParams w(a.eta, a.sigma2);
    manifest.parameters["x"] = format_double(a.x);
    manifest.parameters["eta"] = format_double(a.eta);
    manifest.parameters["sigma2"] = format_double(a.sigma2);
    for (double t : ts) curve.survival.push_back(1.0 - ig_cdf(t, a.x, w));
  } else if (a.model == "mixture") {
    require(a.eta_set && a.sigma2_set, "model=mixture needs --eta and --sigma2");
    const WienerParams w(a.eta, a.sigma2);
    manifest.parameters["eta"] = format_double(a.eta);
    manifest.parameters["sigma2"] = format_double(a.sigma2);
    for (double t : ts)
      curve.survival.push_back(1.0 - mixture_lifetime_cdf(t, w));
  } else {
    throw domain_error("unknown model '" + a.model + "'");
  }

  write_survival_csv(sh.out, curve);
  write_manifest(sh.out + ".manifest.json", manifest);
  note(sh, "wrote " + sh.out + " (" + std::to_string(ts.size()) + " rows)");
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string process;
  double eta = 1.0;
  double sigma2 = 1.0;
  double x = 0.0;
  bool x_set = false;
  double rho = 0.0;
  bool rho_set = false;
  std::string threshold = "inf";
  std::string t_grid;
  std::size_t steps = 0;
  bool dump_paths = false;
};

int run_simulate(const Shared& sh, const SimulateArgs& a) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.seed = sh.seed;
  manifest.parameters["process"] = a.process;
  manifest.parameters["dt"] = format_double(sh.dt);
  manifest.parameters["paths"] = std::to_string(sh.paths);

  if (a.dump_paths) {
    require(a.steps >= 1, "--dump-paths mode needs --steps");
    const PathConfig cfg(sh.dt, a.steps, sh.paths, sh.seed);
    manifest.parameters["steps"] = std::to_string(a.steps);
    manifest.parameters["mode"] = "dump";
    std::vector<double> col_index, col_time, col_value;
    auto append = [&](std::size_t index, const SamplePath& p) {
      for (std::size_t j = 0; j < p.times.size(); ++j) {
        col_index.push_back(static_cast<double>(index));
        col_time.push_back(p.times[j]);
        col_value.push_back(p.values[j]);
      }
    };
    if (a.process == "wiener" || a.process == "wienermax") {
      const WienerParams w(a.eta, a.sigma2);
      manifest.parameters["eta"] = format_double(a.eta);
      manifest.parameters["sigma2"] = format_double(a.sigma2);
      for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        SamplePath p = sample_wiener_path(w, cfg, i);
        if (a.process == "wienermax") p = running_max(p);
        append(i, p);
      }
    } else if (a.process == "gamma") {
      for (std::size_t i = 0; i < cfg.n_paths; ++i)
        append(i, sample_gamma_path(cfg, i));
    } else if (a.process == "corr-bm") {
      require(a.rho_set, "process=corr-bm needs --rho");
      manifest.parameters["rho"] = format_double(a.rho);
      const CorrelationRho rho(a.rho);
      for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        const auto [w1, w2] = sample_correlated_bm_pair(rho, cfg, i);
        append(2 * i, w1);
        append(2 * i + 1, w2);
      }
    } else {
      throw domain_error("process '" + a.process + "' has no path-dump mode");
    }
    write_columns_csv(sh.out, {"path_index", "time", "value"},
                      {col_index, col_time, col_value});
    write_manifest(sh.out + ".manifest.json", manifest);
    note(sh, "wrote " + sh.out);
    return 0;
  }

  require(!a.t_grid.empty(), "estimator mode needs --t-grid (or --dump-paths)");
  const std::vector<double> ts = parse_grid(a.t_grid, "--t-grid");
  std::size_t n_steps = a.steps;
  if (n_steps == 0)
    n_steps = static_cast<std::size_t>(std::floor(ts.back() / sh.dt + 1e-9));
  require(n_steps >= 1, "horizon shorter than one step; lower --dt");
  const PathConfig cfg(sh.dt, n_steps, sh.paths, sh.seed);
  manifest.parameters["steps"] = std::to_string(n_steps);
  manifest.parameters["t_grid"] = a.t_grid;
  manifest.parameters["threads"] = std::to_string(sh.threads);

  std::vector<McEstimate> est;
  bool complement = false;  // estimator returns a CDF, output is survival
  if (a.process == "wiener") {
    require(a.x_set, "process=wiener estimator needs --x (fixed threshold)");
    const WienerParams w(a.eta, a.sigma2);
    manifest.parameters["eta"] = format_double(a.eta);
    manifest.parameters["sigma2"] = format_double(a.sigma2);
    manifest.parameters["x"] = format_double(a.x);
    est = mc_fixed_threshold_hitting_curve(w, a.x, ts, cfg, sh.threads);
    complement = true;
  } else if (a.process == "wienermax") {
    const WienerParams w(a.eta, a.sigma2);
    manifest.parameters["eta"] = format_double(a.eta);
    manifest.parameters["sigma2"] = format_double(a.sigma2);
    est = mc_exponential_threshold_hitting_curve(w, ts, cfg, sh.threads);
    complement = true;
  } else if (a.process == "competing") {
    require(a.rho_set, "process=competing needs --rho");
    manifest.parameters["rho"] = format_double(a.rho);
    est = mc_dependent_competing_survival_curve(CorrelationRho(a.rho), ts, cfg,
                                                sh.threads);
  } else if (a.process == "trauma") {
    double threshold = kInf;
    if (a.threshold != "inf" && a.threshold != "infinity")
      threshold = parse_number(a.threshold, "--threshold");
    manifest.parameters["threshold"] = a.threshold;
    est = mc_trauma_survival_curve(ts, threshold, cfg, sh.threads);
  } else {
    throw domain_error("process '" + a.process + "' has no estimator mode");
  }

  SurvivalCurve curve;
  curve.t = ts;
  for (const auto& e : est) {
    curve.survival.push_back(complement ? 1.0 - e.value : e.value);
    curve.std_err.push_back(e.std_err);
  }
  write_survival_csv(sh.out, curve);
  write_manifest(sh.out + ".manifest.json", manifest);
  if (!sh.quiet) {
    std::cout << "wrote " << sh.out << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
      std::cout << "  t=" << ts[i] << "  survival=" << curve.survival[i]
                << "  se=" << curve.std_err[i] << "\n";
  }
  return 0;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
  std::string data;
  double a = kPi / 8.0;
  double b = 3.0 * kPi / 8.0;
  double beta_p = 2.0;
  double beta_q = 2.0;
  int delta = 3;
  std::size_t n_eta = 64;
  std::size_t n_sigma2 = 64;
  double sigma2_lo = 0.0;
  double sigma2_hi = 0.0;
  bool bounds_set = false;
  bool shift_from_series_max = false;
};

int run_fit(const Shared& sh, const FitArgs& fa) {
  const MarkerSeries series = read_marker_csv(fa.data);
  PriorConfig prior;
  prior.a = fa.a;
  prior.b = fa.b;
  prior.beta_p = fa.beta_p;
  prior.beta_q = fa.beta_q;
  prior.delta = fa.delta;

  GridOptions opts;
  if (fa.bounds_set) opts.sigma2_bounds = {fa.sigma2_lo, fa.sigma2_hi};

  PosteriorArtifact artifact;
  artifact.grid = posterior_grid(series, prior, fa.n_eta, fa.n_sigma2, opts);
  artifact.t_k = series.t_last();
  artifact.z_k = series.z_last();
  artifact.shift =
      threshold_posterior(series, fa.shift_from_series_max).shift();
  write_posterior_artifact(sh.out, artifact);

  RunManifest manifest;
  manifest.command = "fit";
  manifest.seed = sh.seed;
  manifest.parameters["data"] = fa.data;
  manifest.parameters["a"] = format_double(fa.a);
  manifest.parameters["b"] = format_double(fa.b);
  manifest.parameters["beta_p"] = format_double(fa.beta_p);
  manifest.parameters["beta_q"] = format_double(fa.beta_q);
  manifest.parameters["delta"] = std::to_string(fa.delta);
  manifest.parameters["n_eta"] = std::to_string(fa.n_eta);
  manifest.parameters["n_sigma2"] = std::to_string(fa.n_sigma2);
  if (fa.bounds_set) {
    manifest.parameters["sigma2_lo"] = format_double(fa.sigma2_lo);
    manifest.parameters["sigma2_hi"] = format_double(fa.sigma2_hi);
  }
  manifest.parameters["shift_from_series_max"] =
      bool_str(fa.shift_from_series_max);
  write_manifest(sh.out + ".manifest.json", manifest);

  if (!sh.quiet) {
    std::cout << "wrote " << sh.out << "\n"
              << "  k=" << series.k() << "  t_k=" << series.t_last()
              << "  shift=" << artifact.shift << "\n"
              << "  eta: mean=" << artifact.grid.eta_mean()
              << " mode=" << artifact.grid.eta_mode() << "\n"
              << "  sigma2: mean=" << artifact.grid.sigma2_mean()
              << " mode=" << artifact.grid.sigma2_mode() << "\n";
  }
  return 0;
}

// --- predict ----------------------------------------------------------------

struct PredictArgs {
  std::string posterior;
  std::string u_grid = "0:5:0.25";
};

int run_predict(const Shared& sh, const PredictArgs& pa) {
  const PosteriorArtifact artifact = read_posterior_artifact(pa.posterior);
  std::vector<double> us = parse_grid(pa.u_grid, "--u-grid");
  require(!us.empty() && us.front() >= 0.0, "--u-grid: u must be >= 0");
  if (us.front() != 0.0) us.insert(us.begin(), 0.0);

  const ThresholdPosterior xp(artifact.shift);
  const Quadrature q;
  const double denom = predictive_survival(artifact.t_k, artifact.grid, xp, q);
  if (!(denom > 0.0))
    throw numeric_error("predict: predictive survival at t_k is zero", denom,
                        0.0);
  SurvivalCurve curve;
  for (double u : us) {
    curve.t.push_back(u);
    if (u == 0.0) {
      curve.survival.push_back(1.0);
    } else {
      const double num =
          predictive_survival(artifact.t_k + u, artifact.grid, xp, q);
      curve.survival.push_back(std::clamp(num / denom, 0.0, 1.0));
    }
  }

  std::ofstream out(sh.out);
  if (!out) throw data_error(sh.out + ": cannot open for writing");
  out << "u,residual_survival\n";
  for (std::size_t i = 0; i < curve.t.size(); ++i)
    out << format_double(curve.t[i]) << ',' << format_double(curve.survival[i])
        << '\n';
  if (!out) throw data_error(sh.out + ": write failed");

  RunManifest manifest;
  manifest.command = "predict";
  manifest.seed = sh.seed;
  manifest.parameters["posterior"] = pa.posterior;
  manifest.parameters["u_grid"] = pa.u_grid;
  write_manifest(sh.out + ".manifest.json", manifest);
  note(sh, "wrote " + sh.out + " (" + std::to_string(curve.t.size()) + " rows)");
  return 0;
}

// --- figure1 ----------------------------------------------------------------

struct Figure1Args {
  double tmax = 10.0;
  double tstep = 0.05;
};

int run_figure1(const Shared& sh, const Figure1Args& fa) {
  require(fa.tmax > 0.0 && fa.tstep > 0.0, "--tmax and --tstep must be > 0");
  const WienerParams w(1.0, 1.0);
  std::vector<std::vector<double>> cols(7);
  const auto n = static_cast<std::size_t>(std::floor(fa.tmax / fa.tstep + 1e-9));
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * fa.tstep;
    cols[0].push_back(t);
    for (int x = 1; x <= 5; ++x)
      cols[x].push_back(ig_cdf(t, static_cast<double>(x), w));
    cols[6].push_back(mixture_lifetime_cdf(t, w));
  }
  write_columns_csv(sh.out,
                    {"t", "F_x1", "F_x2", "F_x3", "F_x4", "F_x5", "F_mixture"},
                    cols);
  RunManifest manifest;
  manifest.command = "figure1";
  manifest.seed = sh.seed;
  manifest.parameters["tmax"] = format_double(fa.tmax);
  manifest.parameters["tstep"] = format_double(fa.tstep);
  write_manifest(sh.out + ".manifest.json", manifest);
  note(sh, "wrote " + sh.out + " (" + std::to_string(cols[0].size()) + " rows)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hazpot: survival and residual-life computation for hazard-potential "
      "reliability models"};
  app.require_subcommand(1);

  Shared sh;
  SurvivalArgs sv;
  SimulateArgs sim;
  FitArgs fit;
  PredictArgs pred;
  Figure1Args fig;

  auto add_shared = [&sh](CLI::App* sub, bool with_mc) {
    sub->add_option("--out", sh.out, "output file path")->required();
    sub->add_flag("--quiet", sh.quiet, "suppress the stdout summary");
    sub->add_option("--seed", sh.seed, "RNG seed (default 1)");
    if (with_mc) {
      sub->add_option("--paths", sh.paths, "number of Monte Carlo paths");
      sub->add_option("--dt", sh.dt, "time step");
      sub->add_option("--threads", sh.threads,
                      "worker threads (0 = hardware default)");
    }
  };

  CLI::App* c_survival =
      app.add_subcommand("survival", "evaluate a closed-form survival curve");
  add_shared(c_survival, false);
  c_survival->add_option("--model", sv.model,
                         "additive|gumbel|maxrule|bounds|trauma-closed|ig|mixture")
      ->required();
  c_survival->add_option("--hazard", sv.hazards,
                         "power-law cumulative hazard c:p (repeatable)");
  c_survival->add_option("--hazard-table", sv.hazard_tables,
                         "CSV hazard table `time,hazard` (repeatable)");
  c_survival->add_option("--theta", sv.theta, "Gumbel dependence in [0,1]")
      ->each([&sv](const std::string&) { sv.theta_set = true; });
  c_survival->add_option("--x", sv.x, "fixed threshold (model=ig)")
      ->each([&sv](const std::string&) { sv.x_set = true; });
  c_survival->add_option("--eta", sv.eta, "Wiener drift")
      ->each([&sv](const std::string&) { sv.eta_set = true; });
  c_survival->add_option("--sigma2", sv.sigma2, "Wiener diffusion")
      ->each([&sv](const std::string&) { sv.sigma2_set = true; });
  c_survival->add_option("--t-grid", sv.t_grid, "times <start:stop:step> or <t>")
      ->required();

  CLI::App* c_simulate = app.add_subcommand(
      "simulate", "Monte Carlo estimators and path dumps");
  add_shared(c_simulate, true);
  c_simulate->add_option("--process", sim.process,
                         "wiener|wienermax|gamma|corr-bm|trauma|competing")
      ->required();
  c_simulate->add_option("--eta", sim.eta, "Wiener drift (default 1)");
  c_simulate->add_option("--sigma2", sim.sigma2, "Wiener diffusion (default 1)");
  c_simulate->add_option("--x", sim.x, "fixed threshold (process=wiener)")
      ->each([&sim](const std::string&) { sim.x_set = true; });
  c_simulate->add_option("--rho", sim.rho, "Brownian correlation in [-1,1]")
      ->each([&sim](const std::string&) { sim.rho_set = true; });
  c_simulate->add_option("--threshold", sim.threshold,
                         "trauma threshold (number or 'inf')");
  c_simulate->add_option("--t-grid", sim.t_grid,
                         "times <start:stop:step> or <t>");
  c_simulate->add_option("--steps", sim.steps,
                         "grid steps (default: cover the last grid time)");
  c_simulate->add_flag("--dump-paths", sim.dump_paths,
                       "write sampled paths instead of estimates");

  CLI::App* c_fit =
      app.add_subcommand("fit", "fit the marker-model posterior from CSV data");
  add_shared(c_fit, false);
  c_fit->add_option("--data", fit.data, "marker CSV (`time,value`)")->required();
  c_fit->add_option("--a", fit.a, "lower angle bound (rad, default pi/8)");
  c_fit->add_option("--b", fit.b, "upper angle bound (rad, default 3pi/8)");
  c_fit->add_option("--beta-p", fit.beta_p, "beta prior shape p");
  c_fit->add_option("--beta-q", fit.beta_q, "beta prior shape q");
  c_fit->add_option("--delta", fit.delta, "diffusion prior integer Delta");
  c_fit->add_option("--n-eta", fit.n_eta, "eta grid size (default 64)");
  c_fit->add_option("--n-sigma2", fit.n_sigma2, "sigma2 grid size (default 64)");
  CLI::Option* lo = c_fit->add_option("--sigma2-lo", fit.sigma2_lo,
                                      "override lower sigma2 bound");
  CLI::Option* hi = c_fit->add_option("--sigma2-hi", fit.sigma2_hi,
                                      "override upper sigma2 bound");
  lo->needs(hi);
  hi->needs(lo);
  c_fit->add_flag("--shift-from-series-max", fit.shift_from_series_max,
                  "use max_i Z(t_i) instead of Z(t_k) for the threshold shift");

  CLI::App* c_predict = app.add_subcommand(
      "predict", "residual-life curve from a posterior artifact");
  add_shared(c_predict, false);
  c_predict->add_option("--posterior", pred.posterior, "posterior artifact file")
      ->required();
  c_predict->add_option("--u-grid", pred.u_grid,
                        "residual times <start:stop:step> (default 0:5:0.25)");

  CLI::App* c_figure1 = app.add_subcommand(
      "figure1", "IG CDFs at x=1..5 (eta=sigma=1) plus the mixture curve");
  add_shared(c_figure1, false);
  c_figure1->add_option("--tmax", fig.tmax, "grid end (default 10)");
  c_figure1->add_option("--tstep", fig.tstep, "grid step (default 0.05)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c_survival)) return run_survival(sh, sv);
    if (app.got_subcommand(c_simulate)) return run_simulate(sh, sim);
    if (app.got_subcommand(c_fit)) return run_fit(sh, fit);
    if (app.got_subcommand(c_predict)) return run_predict(sh, pred);
    if (app.got_subcommand(c_figure1)) return run_figure1(sh, fig);
    std::cerr << "usage error: no subcommand\n";
    return 2;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what()
              << " (partial estimate " << e.partial_estimate() << ")\n";
    return 4;
  } catch (const domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
