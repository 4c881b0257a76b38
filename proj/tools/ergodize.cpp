// ergodize: eigenvector subsystem norms of coupled Ginibre matrices.
//
//   ergodize curves        limit densities P(p) for a family of couplings
//   ergodize compare       limit vs finite N vs Monte Carlo at one (N, c)
//   ergodize density-scan  eigenvalue density at the origin over a coupling grid
//   ergodize threshold     the bimodal/unimodal coupling threshold
//   ergodize rerun         repeat a run from its manifest.json
//
// Exit codes: 0 ok, 2 usage, 3 empty window, 4 numerical failure.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ergodize/cli/commands.hpp"
#include "ergodize/errors.hpp"
#include "ergodize/parallel.hpp"

using namespace ergodize;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitNumerical = 4;

void add_output_flags(CLI::App* cmd, cli::OutputOptions& out) {
  static const std::map<std::string, cli::Format> formats{{"csv", cli::Format::csv},
                                                          {"json", cli::Format::json}};
  static const std::map<std::string, cli::Plot> plots{
      {"none", cli::Plot::none}, {"svg", cli::Plot::svg}, {"script", cli::Plot::script}};
  cmd->add_option("--out-dir", out.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", out.format, "Data file format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("csv");
  cmd->add_option("--plot", out.plot, "Companion plot")
      ->transform(CLI::CheckedTransformer(plots, CLI::ignore_case))
      ->default_str("none");
}

void add_regime_flag(CLI::App* cmd, Regime& regime) {
  static const std::map<std::string, Regime> regimes{{"fixed_c", Regime::fixed_c},
                                                     {"fixed", Regime::fixed_c},
                                                     {"extensive", Regime::extensive}};
  cmd->add_option("--regime", regime, "fixed_c or extensive (c = sqrt(N) c~)")
      ->transform(CLI::CheckedTransformer(regimes, CLI::ignore_case))
      ->default_str("fixed_c");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvector subsystem norms of coupled Ginibre matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::tool_version());

  cli::OutputOptions out;
  out.workers = default_worker_count();

  // curves
  cli::CurvesConfig curves;
  auto* c_curves = app.add_subcommand("curves", "Limit density P(p) for several |c|^2");
  c_curves->add_option("--coupling-sq", curves.couplings, "|c|^2 values")->capture_default_str();
  c_curves->add_option("--grid", curves.grid, "Interior p points")->capture_default_str();
  add_output_flags(c_curves, out);

  // compare
  cli::CompareConfig compare;
  double compare_c2 = 1.0;
  auto* c_compare = app.add_subcommand("compare", "Limit vs finite-N vs Monte Carlo density of p");
  c_compare->add_option("--n", compare.ensemble.n, "Block size N")->capture_default_str();
  c_compare->add_option("--coupling-sq", compare_c2, "|c|^2 (fixed_c regime)")->capture_default_str();
  c_compare->add_option("--ctilde-sq", compare.ensemble.ctilde_sq, "|c~|^2 (extensive regime)");
  add_regime_flag(c_compare, compare.ensemble.regime);
  c_compare->add_option("--samples", compare.ensemble.samples, "Matrices to sample")->capture_default_str();
  c_compare->add_option("--seed", compare.ensemble.master_seed, "Master seed")->capture_default_str();
  c_compare->add_option("--window-radius", compare.ensemble.window_radius, "Spectral window |z| <= r")
      ->capture_default_str();
  c_compare->add_option("--grid", compare.ensemble.bins, "Histogram bins")->capture_default_str();
  c_compare->add_flag("--records", out.records, "Also write records.csv");
  add_output_flags(c_compare, out);

  // density-scan
  cli::ScanConfig scan;
  std::vector<double> scan_c2, scan_ct2;
  auto* c_scan = app.add_subcommand("density-scan", "Eigenvalue density at z = 0 over a coupling grid");
  add_regime_flag(c_scan, scan.regime);
  c_scan->add_option("--coupling-sq", scan_c2, "|c|^2 grid (fixed_c)");
  c_scan->add_option("--ctilde-sq", scan_ct2, "|c~|^2 grid (extensive)");
  c_scan->add_option("--n", scan.n, "Block size N")->capture_default_str();
  c_scan->add_option("--samples", scan.samples, "Matrices per point (0: no Monte Carlo)")
      ->capture_default_str();
  c_scan->add_option("--seed", scan.master_seed, "Master seed")->capture_default_str();
  c_scan->add_option("--window-radius", scan.window_radius, "Spectral window |z| <= r")
      ->capture_default_str();
  add_output_flags(c_scan, out);

  // threshold
  cli::ThresholdConfig thr;
  auto* c_thr = app.add_subcommand("threshold", "Bimodal/unimodal threshold in |c|^2");
  c_thr->add_option("--grid", thr.grid, "Points in the curvature table")->capture_default_str();
  add_output_flags(c_thr, out);

  // rerun
  std::string manifest;
  auto* c_rerun = app.add_subcommand("rerun", "Repeat a run from its manifest.json");
  c_rerun->add_option("--manifest", manifest, "manifest.json of the original run")->required();
  add_output_flags(c_rerun, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    cli::RunManifest m;
    if (app.got_subcommand(c_curves)) {
      m = cli::cmd_curves(curves, out);
    } else if (app.got_subcommand(c_compare)) {
      compare.ensemble.coupling = Coupling::from_magnitude_sq(compare_c2);
      m = cli::cmd_compare(compare, out);
    } else if (app.got_subcommand(c_scan)) {
      scan.parameters = scan.regime == Regime::extensive ? scan_ct2 : scan_c2;
      if (scan.parameters.empty())
        scan.parameters = scan.regime == Regime::extensive
                              ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0, 1.5}
                              : std::vector<double>{0.25, 1.0, 4.0};
      m = cli::cmd_density_scan(scan, out);
    } else if (app.got_subcommand(c_thr)) {
      m = cli::cmd_threshold(thr, out, std::cout);
    } else {
      m = cli::rerun(manifest, out, std::cout);
    }
    std::cerr << m.command << " run " << m.run_id << " -> " << out.out_dir.string() << '\n';
    return 0;
  } catch (const EmptyWindowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmpty;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
