#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ergodize/cli/manifest.hpp"
#include "ergodize/coupling.hpp"
#include "ergodize/ensemble_mc.hpp"

// Command implementations behind the `ergodize` executable. Each command
// writes its files plus manifest.json into OutputOptions::out_dir and returns
// the manifest.
namespace ergodize::cli {

enum class Format { csv, json };
enum class Plot { none, svg, script };

struct OutputOptions {
  std::filesystem::path out_dir = "ergodize_out";
  Format format = Format::csv;
  Plot plot = Plot::none;
  bool records = false;  // compare: also dump raw eigen records
  unsigned workers = 1;  // not part of the run identity
};

// Default coupling family for `curves`.
inline const std::vector<double> kDefaultCouplings{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
inline constexpr int kDefaultGrid = 399;

struct CurvesConfig {
  std::vector<double> couplings = kDefaultCouplings;
  int grid = kDefaultGrid;
  void validate() const;
};

struct CompareConfig {
  mc::EnsembleConfig ensemble;
  void validate() const;
};

struct ScanConfig {
  Regime regime = Regime::fixed_c;
  std::vector<double> parameters;  // |c|^2 (fixed_c) or |c~|^2 (extensive)
  int n = 200;
  int samples = 100;  // 0: analytic and finite-N columns only
  double window_radius = 2.0;
  std::uint64_t master_seed = 0x5eed;
  void validate() const;
};

struct ThresholdConfig {
  double grid_lo = 0.05;
  double grid_hi = 2.0;
  int grid = 40;
  void validate() const;
};

Json to_json(const CurvesConfig& c);
Json to_json(const CompareConfig& c);
Json to_json(const ScanConfig& c);
Json to_json(const ThresholdConfig& c);
CurvesConfig curves_from_json(const Json& j);
CompareConfig compare_from_json(const Json& j);
ScanConfig scan_from_json(const Json& j);
ThresholdConfig threshold_from_json(const Json& j);

RunManifest cmd_curves(const CurvesConfig& config, const OutputOptions& out);
RunManifest cmd_compare(const CompareConfig& config, const OutputOptions& out);
RunManifest cmd_density_scan(const ScanConfig& config, const OutputOptions& out);
// Also prints the threshold and curvature table to `os` (JSON if out.format is json).
RunManifest cmd_threshold(const ThresholdConfig& config, const OutputOptions& out, std::ostream& os);

// Re-runs the command recorded in a manifest.json with its stored config.
RunManifest rerun(const std::filesystem::path& manifest_path, const OutputOptions& out,
                  std::ostream& os);

const char* to_string(Format f) noexcept;
const char* to_string(Plot p) noexcept;

}  // namespace ergodize::cli
