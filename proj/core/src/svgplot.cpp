#include "covertour/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "covertour/experiment.hpp"

namespace covertour {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kLeft = 70, kRight = 170, kTop = 30, kBottom = 60;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (hi <= lo) return {lo};
  double raw = (hi - lo) / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string render_line_chart(const std::vector<PlotSeries>& series, const std::string& x_label,
                              const std::string& y_label) {
  if (series.empty()) throw std::invalid_argument("nothing to plot");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  bool all_x_positive = true;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.size() != s.ci.size())
      throw std::invalid_argument("series arrays must have equal length");
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - s.ci[i]);
      ymax = std::max(ymax, s.y[i] + s.ci[i]);
      if (s.x[i] <= 0) all_x_positive = false;
    }
  }
  if (!std::isfinite(xmin)) throw std::invalid_argument("nothing to plot");
  const bool log_x = all_x_positive && xmax / xmin >= 1000.0;
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  } else {
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  auto tx = [&](double x) {
    double u = log_x ? (std::log10(x) - std::log10(xmin)) / (std::log10(xmax) - std::log10(xmin))
                     : (x - xmin) / (xmax - xmin);
    return kLeft + u * (kW - kLeft - kRight);
  };
  auto ty = [&](double y) {
    return kH - kBottom - (y - ymin) / (ymax - ymin) * (kH - kTop - kBottom);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";

  std::vector<double> xticks;
  if (log_x) {
    for (double d = std::floor(std::log10(xmin)); d <= std::ceil(std::log10(xmax)); d += 1.0) {
      double v = std::pow(10.0, d);
      if (v >= xmin * (1 - 1e-9) && v <= xmax * (1 + 1e-9)) xticks.push_back(v);
    }
  } else {
    xticks = nice_ticks(xmin, xmax, 6);
  }
  for (double t : xticks) {
    double px = tx(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << kH - kBottom << "\" x2=\"" << px << "\" y2=\""
        << kH - kBottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << kH - kBottom + 20
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax, 6)) {
    double py = ty(t);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\""
        << py << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 15
      << "\" text-anchor=\"middle\">" << x_label << (log_x ? " (log scale)" : "") << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (kTop + kH - kBottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (kTop + kH - kBottom) / 2
      << ")\">" << y_label << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % (sizeof kColors / sizeof kColors[0])];
    std::ostringstream pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      double px = tx(s.x[i]), py = ty(s.y[i]);
      pts << (i ? " " : "") << px << "," << py;
      // CI whiskers
      double lo = ty(s.y[i] - s.ci[i]), hi = ty(s.y[i] + s.ci[i]);
      svg << "<line x1=\"" << px << "\" y1=\"" << lo << "\" x2=\"" << px << "\" y2=\"" << hi
          << "\" stroke=\"" << color << "\"/>\n";
      svg << "<line x1=\"" << px - 3 << "\" y1=\"" << lo << "\" x2=\"" << px + 3 << "\" y2=\""
          << lo << "\" stroke=\"" << color << "\"/>\n";
      svg << "<line x1=\"" << px - 3 << "\" y1=\"" << hi << "\" x2=\"" << px + 3 << "\" y2=\""
          << hi << "\" stroke=\"" << color << "\"/>\n";
      svg << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    if (s.x.size() > 1)
      svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    // legend
    double ly = kTop + 18.0 * si;
    svg << "<line x1=\"" << kW - kRight + 15 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kW - kRight + 46 << "\" y=\"" << ly + 4 << "\">" << s.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void plot_matrix_csv(const std::string& csv_path, const std::string& svg_path) {
  auto rows = read_matrix_csv(csv_path);
  if (rows.empty()) throw std::runtime_error("empty matrix CSV: " + csv_path);
  auto cells = summarize(rows);
  std::vector<PlotSeries> series;
  for (const auto& c : cells) {
    std::string label = c.alpha > 0.0 ? c.algo + "(a=" + num(c.alpha) + ")" : c.algo;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const PlotSeries& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}, {}, {}});
      it = series.end() - 1;
    }
    it->x.push_back(c.sweep_param);
    it->y.push_back(c.mean_ratio);
    it->ci.push_back(c.ci_half);
  }
  std::ofstream f(svg_path);
  if (!f) throw std::runtime_error("cannot write " + svg_path);
  f << render_line_chart(series, "sweep parameter", "empirical competitive ratio");
}

}  // namespace covertour
