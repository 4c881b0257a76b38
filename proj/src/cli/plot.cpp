#include "ergodize/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ergodize::cli {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 55;
const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks over span.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y1 = 0.0;
  for (const auto& s : series)
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) {
    x0 = 0.0;
    x1 = 1.0;
  }
  if (!(y1 > 0.0)) y1 = 1.0;
  const double ystep = nice_step(y1, 5);
  y1 = std::ceil(y1 / ystep) * ystep;
  const double xstep = nice_step(x1 - x0, 5);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + ph - y / y1 * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!spec.run_id.empty()) os << "<!-- run_id=" << spec.run_id << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t = std::ceil(x0 / xstep) * xstep; t <= x1 + 1e-12; t += xstep) {
    os << "<line x1=\"" << sx(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx(t) << "\" y2=\""
       << kTop + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << sx(t) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
       << num(t) << "</text>\n";
  }
  for (double t = 0.0; t <= y1 + 1e-12; t += ystep) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << kLeft << "\" y2=\""
       << sy(t) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(t) + 4 << "\" text-anchor=\"end\">" << num(t)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (spec.markers) {
      for (Eigen::Index i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i]))
          os << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"2.5\" fill=\""
             << color << "\"/>";
      os << '\n';
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (Eigen::Index i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i])) os << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
      os << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\""
       << kWidth - kRight + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly + 4 << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string plot_script(const PlotSpec& spec, const std::string& csv_name) {
  std::ostringstream os;
  const bool json = csv_name.size() >= 5 && csv_name.substr(csv_name.size() - 5) == ".json";
  os << "# run_id=" << spec.run_id << "\n"
     << "import csv\nimport json\nimport matplotlib.pyplot as plt\n\n";
  if (json) {
    os << "cols = json.load(open(\"" << csv_name << "\"))[\"columns\"]\n"
       << "header = list(cols)\n"
       << "data = [[float(\"nan\") if v is None else v for v in row] for row in zip(*cols.values())]\n";
  } else {
    os << "rows = [r for r in csv.reader(open(\"" << csv_name
       << "\")) if r and not r[0].startswith(\"#\")]\n"
       << "header, data = rows[0], [[float(v) for v in r] for r in rows[1:]]\n";
  }
  os << "x = [r[0] for r in data]\n"
     << "for k in range(1, len(header)):\n"
     << "    if header[k] == \"mc_stderr\":\n        continue\n"
     << "    plt.plot(x, [r[k] for r in data], " << (spec.markers ? "\"o\", " : "")
     << "label=header[k])\n"
     << "plt.xlabel(\"" << spec.x_label << "\")\nplt.ylabel(\"" << spec.y_label << "\")\n"
     << "plt.title(\"" << spec.title << "\")\nplt.legend()\n"
     << "plt.savefig(\"" << csv_name.substr(0, csv_name.rfind('.')) << ".png\", dpi=150)\n";
  return os.str();
}

}  // namespace ergodize::cli
