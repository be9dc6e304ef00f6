#pragma once

#include <string>
#include <vector>

namespace covertour {

/// One plotted series: points sorted by x, with a half-width confidence
/// interval per point (zero for a single sample).
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> ci;
};

/// Line chart of mean ratio against the sweep parameter, one series per
/// algorithm, CI whiskers, labeled axes and a legend. The x axis switches to
/// log scale when the positive sweep values span at least three decades.
std::string render_line_chart(const std::vector<PlotSeries>& series, const std::string& x_label,
                              const std::string& y_label);

/// Summarizes a matrix CSV and writes the chart. Throws on an empty CSV.
void plot_matrix_csv(const std::string& csv_path, const std::string& svg_path);

}  // namespace covertour
