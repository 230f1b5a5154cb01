#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qcoin::cli {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool lines = true;
  bool points = true;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

// Minimal SVG line/scatter plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& plot);
void write_svg(const std::filesystem::path& path, const PlotSpec& plot);

}  // namespace qcoin::cli
