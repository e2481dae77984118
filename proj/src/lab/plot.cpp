#include "nlslab/lab/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include <png.h>

#include "nlslab/lab/series_io.hpp"

namespace nlslab::lab {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;

const std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

}  // namespace

void write_svg(const std::filesystem::path& path, const LinePlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  for (const auto& l : plot.lines)
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i]) || (plot.log_y && !(l.y[i] > 0))) continue;
      x0 = std::min(x0, l.x[i]);
      x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, ty(l.y[i]));
      y1 = std::max(y1, ty(l.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(plot.title) +
       "</text>\n";
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const double t : ticks(x0, x1)) {
    s += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
         num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(t) + "</text>\n";
  }
  for (const double t : ticks(y0, y1)) {
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(py(t)) +
         "\" stroke=\"black\"/>\n";
    const std::string label = plot.log_y ? "1e" + num(t) : num(t);
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(t) + 4) + "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  s += "<text transform=\"translate(18," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(plot.y_label) + "</text>\n";
  for (const double m : plot.x_marks) {
    if (m < x0 || m > x1) continue;
    s += "<line x1=\"" + num(px(m)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(px(m)) + "\" y2=\"" + num(kTop + ph) +
         "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (std::size_t k = 0; k < plot.lines.size(); ++k) {
    const auto& l = plot.lines[k];
    const char* color = kPalette[k % kPalette.size()];
    std::string pts;
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i]) || (plot.log_y && !(l.y[i] > 0))) continue;
      pts += num(px(l.x[i])) + "," + num(py(ty(l.y[i]))) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    s += "<line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(kWidth - kRight + 36) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(kWidth - kRight + 42) + "\" y=\"" + num(ly) + "\">" + escape(l.label) + "</text>\n";
  }
  s += "</svg>\n";
  write_text(path, s);
}

namespace {

std::array<unsigned char, 3> lerp_color(const std::array<std::array<double, 3>, 5>& stops, double u) {
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(u));
  const double f = u - i;
  std::array<unsigned char, 3> c{};
  for (int k = 0; k < 3; ++k)
    c[static_cast<std::size_t>(k)] = static_cast<unsigned char>(
        std::lround(255.0 * ((1 - f) * stops[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                             f * stops[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(k)])));
  return c;
}

// viridis-like and blue-white-red ramps
constexpr std::array<std::array<double, 3>, 5> kSequential = {
    {{0.267, 0.005, 0.329}, {0.230, 0.322, 0.546}, {0.128, 0.567, 0.551}, {0.369, 0.789, 0.383}, {0.993, 0.906, 0.144}}};
constexpr std::array<std::array<double, 3>, 5> kDiverging = {
    {{0.020, 0.188, 0.380}, {0.400, 0.650, 0.820}, {0.970, 0.970, 0.970}, {0.890, 0.450, 0.350}, {0.404, 0.000, 0.122}}};

void write_rgb_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
                   const std::vector<unsigned char>& rgb) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw std::runtime_error("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng: cannot allocate writer");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng: write failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < height; ++r)
    png_write_row(png, const_cast<png_bytep>(rgb.data() + 3 * width * r));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_heatmap(const std::filesystem::path& path, const std::vector<std::vector<double>>& values,
                       Colormap cmap) {
  const std::size_t rows = values.size();
  const std::size_t cols = rows ? values.front().size() : 0;
  if (rows == 0 || cols == 0) throw std::invalid_argument("heatmap: empty image");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : values) {
    if (r.size() != cols) throw std::invalid_argument("heatmap: ragged rows");
    for (const double v : r)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (cmap == Colormap::Diverging) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    lo = -m;
    hi = m;
  }
  if (hi == lo) hi = lo + 1;

  const auto& stops = cmap == Colormap::Diverging ? kDiverging : kSequential;
  std::vector<unsigned char> rgb(rows * cols * 3);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::array<unsigned char, 3> px{128, 128, 128};
      if (std::isfinite(values[r][c])) px = lerp_color(stops, (values[r][c] - lo) / (hi - lo));
      std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(3 * (r * cols + c)));
    }
  write_rgb_png(path, cols, rows, rgb);
}

}  // namespace nlslab::lab
