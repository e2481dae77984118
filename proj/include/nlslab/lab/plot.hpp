#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nlslab::lab {

struct Line {
  std::string label;
  std::vector<double> x, y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Line> lines;
  bool log_y = false;
  // optional vertical markers (e.g. trapping entry)
  std::vector<double> x_marks;
};

void write_svg(const std::filesystem::path& path, const LinePlot& plot);

enum class Colormap { Sequential, Diverging };

/// values[r][c] drawn with row 0 at the top; NaN cells are grey. Diverging
/// maps are symmetric about zero.
void write_png_heatmap(const std::filesystem::path& path, const std::vector<std::vector<double>>& values,
                       Colormap cmap);

}  // namespace nlslab::lab
