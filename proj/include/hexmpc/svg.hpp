#pragma once

#include <string>
#include <vector>

#include "hexmpc/geometry.hpp"

namespace hexmpc {

/// Self-contained SVG trajectory plot: a 1 m grid, the start marker, one
/// <path> polyline per trajectory, and one goal marker per trajectory.
struct TrajectoryPlot {
  struct Series {
    std::vector<Pose2> points;
    double goal_x = 0.0;
    double goal_y = 0.0;
    std::string label;
  };

  std::vector<Series> series;

  std::string render() const;
  void save(const std::string& path) const;
};

}  // namespace hexmpc
