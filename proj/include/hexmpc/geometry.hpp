#pragma once

#include <array>
#include <stdexcept>

namespace hexmpc {

/// Wraps an angle into (-pi, pi]. Throws std::invalid_argument on non-finite
/// input.
double wrap_angle(double a);

/// Planar center-of-mass pose. theta is kept in (-pi, pi] by every
/// constructor and operation.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double theta_);
};

/// Body-frame displacement over one motion: polar step (r, alpha) relative to
/// the starting heading plus heading change beta. Canonical form: r >= 0,
/// angles in (-pi, pi], alpha = 0 whenever r = 0.
struct DeltaPose {
  double r = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  DeltaPose() = default;
  DeltaPose(double r_, double alpha_, double beta_);

  std::array<double, 2> cartesian() const;  // (r cos alpha, r sin alpha)
  static DeltaPose from_cartesian(double dx, double dy, double beta);
};

/// Applies d in p's body frame.
Pose2 compose(const Pose2& p, const DeltaPose& d);

/// Measurement inverse of compose: compose(p0, between(p0, p1)) == p1.
/// Displacements below 1e-12 are treated as pure rotation (alpha = 0).
DeltaPose between(const Pose2& p0, const Pose2& p1);

/// Shortest signed angular difference a - b, wrapped into (-pi, pi].
double angle_between(double a, double b);

double planar_distance(const Pose2& p, double gx, double gy);

}  // namespace hexmpc
