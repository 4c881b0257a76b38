#include "ergodize/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "ergodize/analytic_limit.hpp"
#include "ergodize/cli/plot.hpp"
#include "ergodize/errors.hpp"
#include "ergodize/finite_n.hpp"
#include "ergodize/parallel.hpp"
#include "ergodize/specfun.hpp"
#include "ergodize/stats_compare.hpp"

namespace ergodize::cli {

namespace fs = std::filesystem;

const char* to_string(Format f) noexcept { return f == Format::json ? "json" : "csv"; }

const char* to_string(Plot p) noexcept {
  switch (p) {
    case Plot::svg:
      return "svg";
    case Plot::script:
      return "script";
    case Plot::none:
      break;
  }
  return "none";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Table {
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> columns;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

// CSV: "# run_id=..." then the header row. JSON: {"run_id", "columns": {name: [...]}}.
std::string write_table(const fs::path& dir, const std::string& stem, const Table& t,
                        Format format, const std::string& run_id) {
  const std::string name = stem + (format == Format::csv ? ".csv" : ".json");
  if (format == Format::csv) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    os << "# run_id=" << run_id << '\n';
    for (std::size_t k = 0; k < t.names.size(); ++k) os << (k ? "," : "") << t.names[k];
    os << '\n';
    const Eigen::Index rows = t.columns.empty() ? 0 : t.columns.front().size();
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << fmt(t.columns[k][i]);
      os << '\n';
    }
  } else {
    Json j;
    j["run_id"] = run_id;
    Json cols = Json::object();
    for (std::size_t k = 0; k < t.names.size(); ++k) {
      Json arr = Json::array();
      for (Eigen::Index i = 0; i < t.columns[k].size(); ++i) arr.push_back(number_or_null(t.columns[k][i]));
      cols[t.names[k]] = std::move(arr);
    }
    j["columns"] = std::move(cols);
    write_text(dir / name, j.dump(2) + '\n');
  }
  return name;
}

void write_plot(const fs::path& dir, const std::string& stem, const PlotSpec& spec,
                const Table& t, const std::string& data_file, Plot plot,
                std::vector<std::string>& outputs, std::size_t skip_last = 0) {
  if (plot == Plot::svg) {
    std::vector<Series> series;
    for (std::size_t k = 1; k + skip_last < t.columns.size(); ++k)
      series.push_back({t.names[k], t.columns[0], t.columns[k]});
    write_text(dir / (stem + ".svg"), render_svg(spec, series));
    outputs.push_back(stem + ".svg");
  } else if (plot == Plot::script) {
    write_text(dir / ("plot_" + stem + ".py"), plot_script(spec, data_file));
    outputs.push_back("plot_" + stem + ".py");
  }
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw DomainError("cannot create output directory " + dir.string());
}

void require_positive_coupling(double magnitude_sq, const char* what) {
  if (magnitude_sq == 0.0)
    throw DegenerateCouplingError(std::string(what) +
                                  ": |c| = 0 is the degenerate limit (all mass at p = 0 and p = 1); "
                                  "no density to compare");
  if (!(magnitude_sq > 0.0) || !std::isfinite(magnitude_sq))
    throw DomainError(std::string(what) + ": |c|^2 must be positive and finite");
}

Regime regime_from_string(const std::string& s) {
  if (s == "fixed_c") return Regime::fixed_c;
  if (s == "extensive") return Regime::extensive;
  throw DomainError("unknown regime '" + s + "'");
}

}  // namespace

// ---- configs ----

void CurvesConfig::validate() const {
  if (couplings.empty()) throw DomainError("curves: need at least one coupling");
  for (double c : couplings) require_positive_coupling(c, "curves");
  if (grid < 2) throw DomainError("curves: grid must have at least 2 points");
}

void CompareConfig::validate() const {
  ensemble.validate();
  require_positive_coupling(ensemble.effective_coupling().magnitude_sq(), "compare");
  if (ensemble.n > finite_n::kMaxClosedN)
    throw DomainError("compare: N exceeds the finite-N evaluator's range (500)");
}

void ScanConfig::validate() const {
  if (parameters.empty()) throw DomainError("density-scan: empty parameter grid");
  for (double p : parameters)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw DomainError("density-scan: coupling parameters must be finite and >= 0");
  if (n < 2 || n > finite_n::kMaxClosedN) throw DomainError("density-scan: N must be in [2, 500]");
  if (samples < 0) throw DomainError("density-scan: samples must be >= 0");
  if (samples > 0) {
    mc::EnsembleConfig probe;
    probe.n = n;
    probe.samples = samples;
    probe.window_radius = window_radius;
    probe.validate();
  }
}

void ThresholdConfig::validate() const {
  if (!(grid_lo > 0.0) || !(grid_hi > grid_lo)) throw DomainError("threshold: need 0 < lo < hi");
  if (grid < 2) throw DomainError("threshold: grid must have at least 2 points");
}

Json to_json(const CurvesConfig& c) {
  return Json{{"couplings_sq", c.couplings}, {"grid", c.grid}};
}

Json to_json(const CompareConfig& c) {
  const auto& e = c.ensemble;
  return Json{{"n", e.n},
              {"coupling", {e.coupling.value().real(), e.coupling.value().imag()}},
              {"regime", to_string(e.regime)},
              {"ctilde_sq", e.ctilde_sq},
              {"samples", e.samples},
              {"window_radius", e.window_radius},
              {"master_seed", e.master_seed},
              {"solver_tolerance", e.solver_tolerance},
              {"bins", e.bins},
              {"batches", e.batches}};
}

Json to_json(const ScanConfig& c) {
  return Json{{"regime", to_string(c.regime)}, {"parameters", c.parameters},
              {"n", c.n},                      {"samples", c.samples},
              {"window_radius", c.window_radius}, {"master_seed", c.master_seed}};
}

Json to_json(const ThresholdConfig& c) {
  return Json{{"grid_lo", c.grid_lo}, {"grid_hi", c.grid_hi}, {"grid", c.grid}};
}

CurvesConfig curves_from_json(const Json& j) {
  CurvesConfig c;
  c.couplings = j.at("couplings_sq").get<std::vector<double>>();
  c.grid = j.at("grid").get<int>();
  return c;
}

CompareConfig compare_from_json(const Json& j) {
  CompareConfig c;
  auto& e = c.ensemble;
  e.n = j.at("n").get<int>();
  const auto cc = j.at("coupling").get<std::vector<double>>();
  if (cc.size() != 2) throw DomainError("manifest: coupling must be [re, im]");
  e.coupling = Coupling({cc[0], cc[1]});
  e.regime = regime_from_string(j.at("regime").get<std::string>());
  e.ctilde_sq = j.at("ctilde_sq").get<double>();
  e.samples = j.at("samples").get<int>();
  e.window_radius = j.at("window_radius").get<double>();
  e.master_seed = j.at("master_seed").get<std::uint64_t>();
  e.solver_tolerance = j.at("solver_tolerance").get<double>();
  e.bins = j.at("bins").get<int>();
  e.batches = j.at("batches").get<int>();
  return c;
}

ScanConfig scan_from_json(const Json& j) {
  ScanConfig c;
  c.regime = regime_from_string(j.at("regime").get<std::string>());
  c.parameters = j.at("parameters").get<std::vector<double>>();
  c.n = j.at("n").get<int>();
  c.samples = j.at("samples").get<int>();
  c.window_radius = j.at("window_radius").get<double>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  return c;
}

ThresholdConfig threshold_from_json(const Json& j) {
  ThresholdConfig c;
  c.grid_lo = j.at("grid_lo").get<double>();
  c.grid_hi = j.at("grid_hi").get<double>();
  c.grid = j.at("grid").get<int>();
  return c;
}

// ---- commands ----

RunManifest cmd_curves(const CurvesConfig& config, const OutputOptions& out) {
  config.validate();
  prepare_dir(out.out_dir);
  RunManifest m = RunManifest::begin("curves", to_json(config));

  const Eigen::VectorXd grid = stats::interior_grid(config.grid);
  Table t;
  t.names.push_back("p");
  t.columns.push_back(grid);
  std::vector<Eigen::VectorXd> cols(config.couplings.size());
  parallel_for(cols.size(), out.workers, [&](std::size_t k) {
    const Coupling c = Coupling::from_magnitude_sq(config.couplings[k]);
    cols[k].resize(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) cols[k][i] = limit::marginal_density(c, grid[i]);
  });
  Json integrals = Json::object();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::string name = "c2=" + short_fmt(config.couplings[k]);
    t.names.push_back(name);
    t.columns.push_back(cols[k]);
    integrals[name] = stats::DensityCurve{grid, cols[k], stats::CurveKind::analytic_limit}.trapezoid_integral();
  }
  m.tolerances["trapezoid_integral"] = integrals;

  const std::string data = write_table(out.out_dir, "curves", t, out.format, m.run_id);
  m.outputs.push_back(data);
  PlotSpec spec{"Limit density of p for several couplings", "p", "P(p)", m.run_id, false};
  write_plot(out.out_dir, "curves", spec, t, data, out.plot, m.outputs);
  m.finish(out.out_dir);
  return m;
}

RunManifest cmd_compare(const CompareConfig& config, const OutputOptions& out) {
  config.validate();
  prepare_dir(out.out_dir);
  RunManifest m = RunManifest::begin("compare", to_json(config));
  const auto& e = config.ensemble;
  const Coupling c = e.effective_coupling();

  const finite_n::NormalizedJpd fin(e.finite_n_config());
  auto lim = [&](double p) { return limit::marginal_density(c, p); };
  const stats::TabulatedCdf lim_cdf(lim);
  const stats::TabulatedCdf fin_cdf(fin);

  const mc::WindowResult res = mc::collect_window(e, out.workers);
  const NormDistribution& dist = res.distribution;
  const Eigen::VectorXd centers = dist.centers();
  const auto lim_curve = stats::sample_curve(centers, lim, stats::CurveKind::analytic_limit);
  const auto fin_curve = stats::sample_curve(centers, fin, stats::CurveKind::finite_n);
  const stats::DensityCurve emp_curve{centers, dist.density(), stats::CurveKind::empirical};
  const mc::HistogramComparison vs_fin = mc::histogram_vs_analytic(dist, fin_curve, fin_cdf);

  Table t;
  t.names = {"p", "density_limit", "density_finite_n", "density_mc", "mc_stderr"};
  t.columns = {centers, lim_curve.values, fin_curve.values, dist.density(), dist.density_stderr()};
  const std::string data = write_table(out.out_dir, "compare", t, out.format, m.run_id);
  m.outputs.push_back(data);

  double max_residual = 0.0;
  for (const auto& r : res.records) max_residual = std::max(max_residual, r.residual);

  Json summary;
  summary["run_id"] = m.run_id;
  summary["n"] = e.n;
  summary["regime"] = to_string(e.regime);
  summary["coupling_sq"] = c.magnitude_sq();
  summary["samples"] = e.samples;
  summary["window_radius"] = e.window_radius;
  summary["total_hits"] = res.total_hits();
  summary["density_at_origin"] = {
      {"mc", res.density},
      {"mc_stderr", number_or_null(res.density_stderr)},
      {"finite_n", fin.density()},
      {"limit", e.regime == Regime::extensive ? limit::density_at_origin_extensive(e.ctilde_sq)
                                              : limit::density_at_origin_limit()}};
  summary["distances"] = {
      {"ks_mc_vs_limit", stats::ks_distance(dist, lim_cdf)},
      {"ks_mc_vs_finite_n", vs_fin.ks},
      {"w1_mc_vs_limit", stats::wasserstein1(emp_curve, lim_curve)},
      {"w1_mc_vs_finite_n", stats::wasserstein1(emp_curve, fin_curve)},
      {"w1_finite_n_vs_limit", stats::wasserstein1(fin_curve, lim_curve)}};
  summary["max_abs_z_vs_finite_n"] = vs_fin.max_abs_z;
  summary["max_residual"] = max_residual;
  write_text(out.out_dir / "compare_summary.json", summary.dump(2) + '\n');
  m.outputs.push_back("compare_summary.json");

  if (out.records) {
    std::ofstream os(out.out_dir / "records.csv");
    if (!os) throw std::runtime_error("cannot write records.csv");
    os << "# run_id=" << m.run_id << '\n';
    mc::write_records_csv(os, res.records);
    m.outputs.push_back("records.csv");
  }

  PlotSpec spec{"Density of p: limit, finite N, Monte Carlo", "p", "density", m.run_id, false};
  write_plot(out.out_dir, "compare", spec, t, data, out.plot, m.outputs, 1);
  m.tolerances["max_eigen_residual"] = max_residual;
  m.tolerances["solver_tolerance"] = e.solver_tolerance;
  m.tolerances["limit_cdf_mass_error"] = lim_cdf.raw_total() - 1.0;
  m.tolerances["finite_n_cdf_mass_error"] = fin_cdf.raw_total() - 1.0;
  m.finish(out.out_dir);
  return m;
}

RunManifest cmd_density_scan(const ScanConfig& config, const OutputOptions& out) {
  config.validate();
  prepare_dir(out.out_dir);
  RunManifest m = RunManifest::begin("density-scan", to_json(config));
  const std::size_t count = config.parameters.size();

  Eigen::VectorXd param(count), analytic(count), finite(count), mc_density(count), mc_err(count);
  std::vector<std::int64_t> hits(count, 0);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = config.parameters[k];
    param[k] = x;
    finite_n::FiniteNConfig fcfg =
        config.regime == Regime::extensive
            ? finite_n::FiniteNConfig::extensive(config.n, x)
            : finite_n::FiniteNConfig::fixed(config.n, Coupling::from_magnitude_sq(x));
    analytic[k] = config.regime == Regime::extensive ? limit::density_at_origin_extensive(x)
                                                     : limit::density_at_origin_limit();
    finite[k] = finite_n::density_finite_n(fcfg);
    mc_density[k] = kNaN;
    mc_err[k] = kNaN;
    if (config.samples == 0) continue;
    mc::EnsembleConfig e;
    e.n = config.n;
    e.regime = config.regime;
    e.coupling = Coupling::from_magnitude_sq(config.regime == Regime::fixed_c ? x : 0.0);
    e.ctilde_sq = config.regime == Regime::extensive ? x : 0.0;
    e.samples = config.samples;
    e.window_radius = config.window_radius;
    e.master_seed = config.master_seed;
    try {
      const mc::WindowResult r = mc::collect_window(e, out.workers);
      mc_density[k] = r.density;
      mc_err[k] = r.density_stderr;
      hits[k] = r.total_hits();
    } catch (const EmptyWindowError&) {
      mc_density[k] = 0.0;
      mc_err[k] = 0.0;
    }
  }
  if (config.samples > 0 && std::all_of(hits.begin(), hits.end(), [](auto h) { return h == 0; }))
    throw EmptyWindowError("density-scan: no eigenvalues in the window at any scan point; "
                           "increase --window-radius or --samples");

  Table t;
  t.names = {"coupling_parameter", "density_analytic", "density_finite_n", "density_mc", "mc_stderr"};
  t.columns = {param, analytic, finite, mc_density, mc_err};
  const std::string data = write_table(out.out_dir, "density", t, out.format, m.run_id);
  m.outputs.push_back(data);

  Json summary;
  summary["run_id"] = m.run_id;
  summary["regime"] = to_string(config.regime);
  summary["n"] = config.n;
  summary["identity_threshold"] = specfun::identity_threshold();
  summary["window_hits"] = hits;
  write_text(out.out_dir / "density_summary.json", summary.dump(2) + '\n');
  m.outputs.push_back("density_summary.json");

  PlotSpec spec{"Eigenvalue density at the origin",
                config.regime == Regime::extensive ? "|c~|^2" : "|c|^2", "density", m.run_id, true};
  write_plot(out.out_dir, "density", spec, t, data, out.plot, m.outputs, 1);
  m.finish(out.out_dir);
  return m;
}

RunManifest cmd_threshold(const ThresholdConfig& config, const OutputOptions& out, std::ostream& os) {
  config.validate();
  prepare_dir(out.out_dir);
  RunManifest m = RunManifest::begin("threshold", to_json(config));
  const double th = specfun::identity_threshold();

  Json j;
  j["run_id"] = m.run_id;
  j["identity_threshold"] = th;
  Json rows = Json::array();
  for (int k = 0; k < config.grid; ++k) {
    const double s = config.grid_lo + (config.grid_hi - config.grid_lo) * k / (config.grid - 1);
    const double curv = limit::midpoint_curvature(Coupling::from_magnitude_sq(s));
    rows.push_back({{"coupling_sq", s}, {"curvature", curv}, {"sign", curv > 0 ? 1 : (curv < 0 ? -1 : 0)}});
  }
  j["curvature"] = rows;

  if (out.format == Format::json) {
    os << j.dump(2) << '\n';
  } else {
    os << "identity_threshold " << fmt(th) << '\n';
    os << "coupling_sq curvature sign\n";
    for (const auto& r : rows)
      os << fmt(r["coupling_sq"].get<double>()) << ' ' << fmt(r["curvature"].get<double>()) << ' '
         << (r["sign"].get<int>() > 0 ? "+" : (r["sign"].get<int>() < 0 ? "-" : "0")) << '\n';
  }
  write_text(out.out_dir / "threshold.json", j.dump(2) + '\n');
  m.outputs.push_back("threshold.json");
  m.finish(out.out_dir);
  return m;
}

RunManifest rerun(const fs::path& manifest_path, const OutputOptions& out, std::ostream& os) {
  std::ifstream is(manifest_path);
  if (!is) throw DomainError("cannot read manifest " + manifest_path.string());
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
  const RunManifest old = RunManifest::from_json(j);
  try {
    if (old.command == "curves") return cmd_curves(curves_from_json(old.config), out);
    if (old.command == "compare") return cmd_compare(compare_from_json(old.config), out);
    if (old.command == "density-scan") return cmd_density_scan(scan_from_json(old.config), out);
    if (old.command == "threshold") return cmd_threshold(threshold_from_json(old.config), out, os);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("manifest config: ") + e.what());
  }
  throw DomainError("manifest: unknown command '" + old.command + "'");
}

}  // namespace ergodize::cli
