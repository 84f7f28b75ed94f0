#include "ipsep/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ipsep/errors.hpp"
#include "ipsep/io.hpp"

namespace ipsep {

namespace {

struct Canvas {
  int w, h;
  std::vector<unsigned char> px;
  Canvas(int w_, int h_) : w(w_), h(h_), px(std::size_t(w_) * h_, 255) {}
  void set(int x, int y, unsigned char v = 0) {
    if (x >= 0 && x < w && y >= 0 && y < h) px[std::size_t(y) * w + x] = v;
  }
  void line(int x0, int y0, int x1, int y1, unsigned char v = 0) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      set(x0, y0, v);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
};

}  // namespace

void write_line_plot(const std::vector<double>& x, const std::vector<double>& y, const std::string& path, int width,
                     int height) {
  if (x.size() != y.size()) throw ShapeError("plot needs equally long x and y");
  if (width < 32 || height < 32) throw ParamError("plot canvas too small");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) pts.emplace_back(x[i], y[i]);

  Canvas c(width, height);
  const int m = 16;
  const int left = m, right = width - m, top = m, bottom = height - m;
  c.line(left, bottom, right, bottom);
  c.line(left, bottom, left, top);
  if (!pts.empty()) {
    auto [xlo, xhi] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.first < b.first; });
    auto [ylo, yhi] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.second < b.second; });
    double x0 = xlo->first, x1 = xhi->first, y0 = ylo->second, y1 = yhi->second;
    if (x1 == x0) x0 -= 1, x1 += 1;
    if (y1 == y0) y0 -= 1, y1 += 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double v) { return left + static_cast<int>(std::lround((v - x0) / (x1 - x0) * (right - left))); };
    auto py = [&](double v) { return bottom - static_cast<int>(std::lround((v - y0) / (y1 - y0) * (bottom - top))); };
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int u = px(pts[i].first), v = py(pts[i].second);
      c.line(u, bottom, u, bottom + 4);  // tick
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) c.set(u + a, v + b);
      if (i > 0) c.line(px(pts[i - 1].first), py(pts[i - 1].second), u, v);
    }
  }
  write_png_gray(c.px, height, width, path);
}

}  // namespace ipsep
