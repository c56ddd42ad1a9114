#include "hexmpc/geometry.hpp"

#include <array>
#include <cmath>

namespace hexmpc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kTinyDisplacement = 1e-12;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}
}  // namespace

double wrap_angle(double a) {
  require_finite(a, "angle");
  double w = std::fmod(a, kTwoPi);
  if (w <= -kPi) {
    w += kTwoPi;
  } else if (w > kPi) {
    w -= kTwoPi;
  }
  return w;
}

Pose2::Pose2(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {
  require_finite(x_, "x");
  require_finite(y_, "y");
}

DeltaPose::DeltaPose(double r_, double alpha_, double beta_)
    : r(r_), alpha(wrap_angle(alpha_)), beta(wrap_angle(beta_)) {
  require_finite(r_, "r");
  if (r_ < 0.0) {
    throw std::invalid_argument("DeltaPose: negative displacement");
  }
  if (r == 0.0) {
    alpha = 0.0;
  }
}

std::array<double, 2> DeltaPose::cartesian() const {
  return {r * std::cos(alpha), r * std::sin(alpha)};
}

DeltaPose DeltaPose::from_cartesian(double dx, double dy, double beta) {
  double r = std::hypot(dx, dy);
  double alpha = r < kTinyDisplacement ? 0.0 : std::atan2(dy, dx);
  return DeltaPose(r, alpha, beta);
}

Pose2 compose(const Pose2& p, const DeltaPose& d) {
  double heading = p.theta + d.alpha;
  return Pose2(p.x + d.r * std::cos(heading), p.y + d.r * std::sin(heading),
               p.theta + d.beta);
}

DeltaPose between(const Pose2& p0, const Pose2& p1) {
  double dx = p1.x - p0.x;
  double dy = p1.y - p0.y;
  double r = std::hypot(dx, dy);
  double alpha = r < kTinyDisplacement ? 0.0 : wrap_angle(std::atan2(dy, dx) - p0.theta);
  return DeltaPose(r, alpha, wrap_angle(p1.theta - p0.theta));
}

double angle_between(double a, double b) { return wrap_angle(a - b); }

double planar_distance(const Pose2& p, double gx, double gy) {
  return std::hypot(gx - p.x, gy - p.y);
}

}  // namespace hexmpc
