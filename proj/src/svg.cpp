#include "hexmpc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hexmpc/io.hpp"

namespace hexmpc {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string TrajectoryPlot::render() const {
  double min_x = -1.0, max_x = 1.0, min_y = -1.0, max_y = 1.0;
  for (const Series& s : series) {
    for (const Pose2& p : s.points) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    min_x = std::min(min_x, s.goal_x);
    max_x = std::max(max_x, s.goal_x);
    min_y = std::min(min_y, s.goal_y);
    max_y = std::max(max_y, s.goal_y);
  }
  min_x -= 0.5;
  min_y -= 0.5;
  max_x += 0.5;
  max_y += 0.5;

  const double scale = 60.0;  // pixels per meter
  double width = (max_x - min_x) * scale;
  double height = (max_y - min_y) * scale;
  auto px = [&](double x) { return (x - min_x) * scale; };
  auto py = [&](double y) { return height - (y - min_y) * scale; };  // y up

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (double gx = std::ceil(min_x); gx <= std::floor(max_x); gx += 1.0) {
    bool axis = std::fabs(gx) < 1e-9;
    svg << "<line x1=\"" << num(px(gx)) << "\" y1=\"0\" x2=\"" << num(px(gx)) << "\" y2=\""
        << num(height) << "\" stroke=\"" << (axis ? "#999999" : "#e0e0e0")
        << "\" stroke-width=\"1\"/>\n";
  }
  for (double gy = std::ceil(min_y); gy <= std::floor(max_y); gy += 1.0) {
    bool axis = std::fabs(gy) < 1e-9;
    svg << "<line x1=\"0\" y1=\"" << num(py(gy)) << "\" x2=\"" << num(width) << "\" y2=\""
        << num(py(gy)) << "\" stroke=\"" << (axis ? "#999999" : "#e0e0e0")
        << "\" stroke-width=\"1\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
    if (!s.points.empty()) {
      svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" d=\"";
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        svg << (k == 0 ? "M" : " L") << num(px(s.points[k].x)) << " " << num(py(s.points[k].y));
      }
      svg << "\"/>\n";
    }
    svg << "<circle cx=\"" << num(px(s.goal_x)) << "\" cy=\"" << num(py(s.goal_y))
        << "\" r=\"5\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    if (!s.label.empty()) {
      svg << "<text x=\"" << num(px(s.goal_x) + 8.0) << "\" y=\"" << num(py(s.goal_y) - 8.0)
          << "\" font-size=\"12\" fill=\"" << color << "\">" << s.label << "</text>\n";
    }
  }
  if (!series.empty() && !series[0].points.empty()) {
    const Pose2& start = series[0].points.front();
    svg << "<circle cx=\"" << num(px(start.x)) << "\" cy=\"" << num(py(start.y))
        << "\" r=\"4\" fill=\"#000000\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void TrajectoryPlot::save(const std::string& path) const { io::write_file(path, render()); }

}  // namespace hexmpc
