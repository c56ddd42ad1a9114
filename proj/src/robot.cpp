#include "hexmpc/robot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hexmpc/geometry.hpp"

namespace hexmpc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RobotModel RobotModel::standard() {
  RobotModel m;
  // Left legs 0-2 counterclockwise from front-left, right legs 3-5 so that
  // leg i and leg 5-i are reflections across the body x-axis.
  m.mount_angle = {kPi / 6.0, kPi / 2.0, 5.0 * kPi / 6.0,
                   -5.0 * kPi / 6.0, -kPi / 2.0, -kPi / 6.0};
  m.mirror_leg = {5, 4, 3, 2, 1, 0};
  for (int leg = 0; leg < kLegCount; ++leg) {
    m.joint_min[3 * leg + 0] = -0.7;
    m.joint_max[3 * leg + 0] = 0.7;
    m.joint_min[3 * leg + 1] = -1.6;
    m.joint_max[3 * leg + 1] = 1.6;
    m.joint_min[3 * leg + 2] = -1.6;
    m.joint_max[3 * leg + 2] = 1.6;
  }
  return m;
}

void RobotModel::validate() const {
  if (coxa <= 0.0 || femur <= 0.0 || tibia <= 0.0 || mount_radius <= 0.0) {
    throw std::invalid_argument("RobotModel: link lengths must be positive");
  }
  if (kp < 0.0 || kd < 0.0 || joint_velocity_limit <= 0.0) {
    throw std::invalid_argument("RobotModel: gains must be >= 0 and velocity limit > 0");
  }
  for (int j = 0; j < kJointCount; ++j) {
    if (!(joint_min[j] < joint_max[j])) {
      throw std::invalid_argument("RobotModel: joint_min must be < joint_max");
    }
  }
  for (int leg = 0; leg < kLegCount; ++leg) {
    int m = mirror_leg[leg];
    if (m < 0 || m >= kLegCount || mirror_leg[m] != leg) {
      throw std::invalid_argument("RobotModel: mirror_leg is not an involution");
    }
  }
}

std::array<Vec3, kLegCount> foot_positions(const RobotModel& model, const JointVector& q) {
  std::array<Vec3, kLegCount> feet{};
  for (int leg = 0; leg < kLegCount; ++leg) {
    double base = q[3 * leg + 0];
    double shoulder = q[3 * leg + 1];
    double elbow = q[3 * leg + 2];
    double reach = model.coxa + model.femur * std::cos(shoulder) +
                   model.tibia * std::cos(shoulder - elbow);
    double z = -model.body_height - model.femur * std::sin(shoulder) -
               model.tibia * std::sin(shoulder - elbow);
    double mount = model.mount_angle[leg];
    double dir = mount + base;
    feet[leg] = {model.mount_radius * std::cos(mount) + reach * std::cos(dir),
                 model.mount_radius * std::sin(mount) + reach * std::sin(dir), z};
  }
  return feet;
}

JointVector velocity_command(const RobotModel& model, const JointVector& q_des,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& qff) {
  JointVector out{};
  for (int j = 0; j < kJointCount; ++j) {
    if (!std::isfinite(q_des[j]) || !std::isfinite(q[j]) || !std::isfinite(qdot[j]) ||
        !std::isfinite(qff[j])) {
      throw std::invalid_argument("velocity_command: non-finite input");
    }
    double v = model.kp * (q_des[j] - q[j]) - model.kd * qdot[j] + qff[j];
    out[j] = std::clamp(v, -model.joint_velocity_limit, model.joint_velocity_limit);
  }
  return out;
}

JointState neutral_stance(const RobotModel&) {
  return JointState{};  // all joints at the straight-leg zero
}

}  // namespace hexmpc
