#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace ergodize::cli {

struct Series {
  std::string label;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string run_id;
  bool markers = false;  // dots instead of a polyline
};

// Minimal static SVG: axes, ticks, one polyline per series, legend.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

// matplotlib script reading `csv_name` (CSV with '#' comment lines, or the
// JSON table layout when the name ends in .json) and plotting the columns
// after the first against the first.
std::string plot_script(const PlotSpec& spec, const std::string& csv_name);

}  // namespace ergodize::cli
